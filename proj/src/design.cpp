#include "rcd/design.hpp"

#include <algorithm>
#include <numeric>

namespace rcd {

namespace {

// Symbol membership of a line, one byte per symbol.
using Line = std::vector<char>;

std::vector<Line> lines(const Array& a, Axis axis) {
    const int n = axis == Axis::rows ? a.rows() : a.cols();
    std::vector<Line> out(n, Line(a.symbols(), 0));
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) {
            const Symbol s = a.at(i, j);
            if (s < a.symbols())
                out[axis == Axis::rows ? i : j][s] = 1;
        }
    return out;
}

int meet(const Line& x, const Line& y) {
    int n = 0;
    for (std::size_t s = 0; s < x.size(); ++s)
        n += x[s] & y[s];
    return n;
}

Rational mean(const std::vector<int>& xs) {
    if (xs.empty())
        return Rational(0);
    const std::int64_t total = std::accumulate(xs.begin(), xs.end(), std::int64_t{0});
    return Rational(total, static_cast<std::int64_t>(xs.size()));
}

std::optional<int> constant(const std::vector<int>& sorted) {
    if (sorted.empty())
        return 0;
    if (sorted.front() != sorted.back())
        return std::nullopt;
    return sorted.front();
}

int find(std::vector<int>& parent, int x) {
    while (parent[x] != x) {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    return x;
}

}  // namespace

ValidationReport validate(const Array& a) {
    ValidationReport report;
    const int r = a.rows(), c = a.cols(), v = a.symbols();
    std::vector<int> count(v, 0);
    bool range_ok = true;
    for (int j = 0; j < c; ++j)
        for (int i = 0; i < r; ++i) {
            const Symbol s = a.at(i, j);
            if (s >= v) {
                range_ok = false;
                report.violations.push_back({ViolationKind::out_of_range, s,
                                             "cell (" + std::to_string(i) + "," + std::to_string(j) +
                                                 ") holds symbol " + std::to_string(s) + " >= v"});
            } else {
                ++count[s];
            }
        }
    if (!range_ok)
        return report;

    std::vector<int> seen(v, -1);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j) {
            const Symbol s = a.at(i, j);
            if (seen[s] == i) {
                report.violations.push_back({ViolationKind::repeat_in_row, i,
                                             "symbol " + std::to_string(s) + " repeats in row " + std::to_string(i)});
                break;
            }
            seen[s] = i;
        }
    std::fill(seen.begin(), seen.end(), -1);
    for (int j = 0; j < c; ++j)
        for (int i = 0; i < r; ++i) {
            const Symbol s = a.at(i, j);
            if (seen[s] == j) {
                report.violations.push_back({ViolationKind::repeat_in_column, j,
                                             "symbol " + std::to_string(s) + " repeats in column " +
                                                 std::to_string(j)});
                break;
            }
            seen[s] = j;
        }

    if (v == 0 || (r * c) % v != 0) {
        report.violations.push_back({ViolationKind::non_equireplicate, -1,
                                     "rc = " + std::to_string(r * c) + " is not divisible by v = " + std::to_string(v)});
        return report;
    }
    const int e = r * c / v;
    report.replication = e;
    for (int s = 0; s < v; ++s)
        if (count[s] != e) {
            report.violations.push_back({ViolationKind::non_equireplicate, s,
                                         "symbol " + std::to_string(s) + " occurs " + std::to_string(count[s]) +
                                             " times, expected " + std::to_string(e)});
        }
    return report;
}

IntersectionProfile intersections(const Array& a) {
    IntersectionProfile p;
    const auto rows = lines(a, Axis::rows);
    const auto cols = lines(a, Axis::columns);
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t k = i + 1; k < rows.size(); ++k)
            p.rr.push_back(meet(rows[i], rows[k]));
    for (std::size_t j = 0; j < cols.size(); ++j)
        for (std::size_t k = j + 1; k < cols.size(); ++k)
            p.cc.push_back(meet(cols[j], cols[k]));
    for (const auto& row : rows)
        for (const auto& col : cols)
            p.rc.push_back(meet(row, col));
    std::sort(p.rr.begin(), p.rr.end());
    std::sort(p.cc.begin(), p.cc.end());
    std::sort(p.rc.begin(), p.rc.end());
    p.mean_rr = mean(p.rr);
    p.mean_cc = mean(p.cc);
    p.mean_rc = mean(p.rc);
    return p;
}

std::string_view label_name(Label l) {
    switch (l) {
        case Label::TA: return "TA";
        case Label::DA: return "DA";
        case Label::SA: return "SA";
        case Label::SAT: return "SAT";
        case Label::MA: return "MA";
        case Label::MAT: return "MAT";
        case Label::AO: return "AO";
        case Label::none: return "none";
    }
    return "none";
}

std::optional<Label> parse_label(std::string_view s) {
    for (Label l : {Label::TA, Label::DA, Label::SA, Label::SAT, Label::MA, Label::MAT, Label::AO, Label::none})
        if (label_name(l) == s)
            return l;
    return std::nullopt;
}

Label label_for(bool rr, bool cc, bool rc) {
    if (rr && cc && rc)
        return Label::TA;
    if (rr && cc)
        return Label::DA;
    if (cc && rc)
        return Label::SAT;
    if (rr && rc)
        return Label::SA;
    if (cc)
        return Label::MA;
    if (rr)
        return Label::MAT;
    if (rc)
        return Label::AO;
    return Label::none;
}

DesignClassification classify(const Array& a) {
    const IntersectionProfile p = intersections(a);
    DesignClassification d;
    d.rr = constant(p.rr);
    d.cc = constant(p.cc);
    d.rc = constant(p.rc);
    d.label = label_for(d.rr.has_value(), d.cc.has_value(), d.rc.has_value());
    d.connected_rows = connectivity(a, Axis::rows);
    d.connected_cols = connectivity(a, Axis::columns);
    return d;
}

bool connectivity(const Array& a, Axis axis) {
    // Nodes: lines first, then symbols.
    const int n_lines = axis == Axis::rows ? a.rows() : a.cols();
    const int v = a.symbols();
    std::vector<int> parent(n_lines + v);
    std::iota(parent.begin(), parent.end(), 0);
    std::vector<char> used(v, 0);
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) {
            const int s = a.at(i, j);
            if (s >= v)
                continue;
            used[s] = 1;
            const int line = axis == Axis::rows ? i : j;
            parent[find(parent, line)] = find(parent, n_lines + s);
        }
    int root = -1;
    for (int x = 0; x < n_lines + v; ++x) {
        if (x >= n_lines && !used[x - n_lines])
            return false;
        const int rx = find(parent, x);
        if (root < 0)
            root = rx;
        else if (rx != root)
            return false;
    }
    return true;
}

}  // namespace rcd
