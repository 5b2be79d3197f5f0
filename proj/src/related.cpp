#include "rcd/related.hpp"

#include <set>

#include "rcd/canonical.hpp"
#include "rcd/enumerate.hpp"

namespace rcd {

bool is_youden_rectangle(const Array& y) {
    const int k = y.rows(), n = y.cols();
    if (y.symbols() != n || k < 1 || k > n || !validate(y).ok())
        return false;
    if (n == 1)
        return true;
    if ((k * (k - 1)) % (n - 1) != 0)
        return false;
    const auto cls = classify(y);
    return cls.cc && *cls.cc == k * (k - 1) / (n - 1);
}

Array youden_to_mono(const Array& y, int col) {
    if (!is_youden_rectangle(y))
        throw Refused("input is not a Youden rectangle");
    const int k = y.rows(), n = y.cols();
    if (col < 0 || col >= n)
        throw ParameterError("column index out of range");
    if (n - k < 1)
        throw Refused("removing a column of a Latin square leaves no symbols");
    std::vector<int> sym_index(n, -1), col_index(n, -1);
    std::vector<bool> removed(n, false);
    for (int i = 0; i < k; ++i)
        removed[y.at(i, col)] = true;
    for (int s = 0, next = 0; s < n; ++s)
        if (!removed[s])
            sym_index[s] = next++;
    for (int j = 0, next = 0; j < n; ++j)
        if (j != col)
            col_index[j] = next++;
    Array out(k, n - k, n - 1);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < n; ++j) {
            const int s = y.at(i, j);
            if (!removed[s])
                out.set(i, sym_index[s], static_cast<Symbol>(col_index[j]));
        }
    return out;
}

std::vector<Array> enumerate_youden(int n, int k, int max_n) {
    if (n < 2 || k < 2 || k > n)
        throw ParameterError("need 2 <= k <= n");
    if (n > max_n)
        throw Refused("Youden enumeration is limited to n <= " + std::to_string(max_n));
    if ((k * (k - 1)) % (n - 1) != 0)
        return {};
    SearchTarget t;
    t.v = n;
    t.r = k;
    t.c = n;
    t.mode = SearchMode::constant_columns;
    const EnumerationReport rep = enumerate(t);
    std::vector<Array> out;
    for (const auto& [_, reps] : rep.representatives)
        for (const auto& r : reps)
            out.push_back(r.array);
    std::sort(out.begin(), out.end());
    return out;
}

Coverage youden_coverage(int n, int k, Label label, int max_n) {
    Coverage cov;
    std::set<Array> hits;
    for (const Array& y : enumerate_youden(n, k, max_n))
        for (int j = 0; j < n; ++j) {
            const Array m = youden_to_mono(y, j);
            if (classify(m).label == label)
                hits.insert(canonical(m).array);
        }
    cov.hit = hits.size();
    SearchTarget t;
    t.v = n - 1;
    t.r = k;
    t.c = n - k;
    t.mode = SearchMode::constant_columns;
    t.keep_representatives = false;
    cov.total = enumerate(t).count(label);
    return cov;
}

bool is_pyd(const Array& a) {
    if (a.rows() != a.cols())
        throw Refused("a pseudo Youden design has to be square");
    const int v = a.symbols(), r = a.rows();
    std::vector<int> pairs(static_cast<std::size_t>(v) * v, 0);
    std::vector<int> line;
    auto count_line = [&](bool row, int idx) {
        line.clear();
        for (int t = 0; t < r; ++t)
            line.push_back(row ? a.at(idx, t) : a.at(t, idx));
        for (std::size_t p = 0; p < line.size(); ++p)
            for (std::size_t q = p + 1; q < line.size(); ++q) {
                ++pairs[line[p] * v + line[q]];
                ++pairs[line[q] * v + line[p]];
            }
    };
    for (int i = 0; i < r; ++i) {
        count_line(true, i);
        count_line(false, i);
    }
    int first = -1;
    for (int s = 0; s < v; ++s)
        for (int t = s + 1; t < v; ++t) {
            if (first < 0)
                first = pairs[s * v + t];
            else if (pairs[s * v + t] != first)
                return false;
        }
    return true;
}

}  // namespace rcd
