#include "rcd/constructions.hpp"

#include <numeric>
#include <random>

#include "rcd/canonical.hpp"
#include "rcd/design.hpp"

namespace rcd {

namespace {

void check_symbols(long long v) {
    if (v > max_symbols)
        throw Refused("product needs " + std::to_string(v) + " symbols, more than " + std::to_string(max_symbols));
}

Array block_product(const Array& s, const Array& t, const std::vector<Array>& per_cell) {
    const int r = s.rows(), c = s.cols(), a = t.rows(), b = t.cols(), vt = t.symbols();
    check_symbols(static_cast<long long>(s.symbols()) * vt);
    if (!per_cell.empty()) {
        if (per_cell.size() != s.cells().size())
            throw ParameterError("per-cell factors must cover every cell of S");
        for (const Array& x : per_cell)
            if (!is_isotopic(x, t))
                throw ParameterError("per-cell factor is not isotopic to T");
    }
    Array out(r * a, c * b, s.symbols() * vt);
    for (int j = 0; j < c; ++j)
        for (int i = 0; i < r; ++i) {
            const Array& f = per_cell.empty() ? t : per_cell[static_cast<std::size_t>(j) * r + i];
            const int base = s.at(i, j) * vt;
            for (int jj = 0; jj < b; ++jj)
                for (int ii = 0; ii < a; ++ii)
                    out.set(i * a + ii, j * b + jj, static_cast<Symbol>(base + f.at(ii, jj)));
        }
    return out;
}

}  // namespace

Array sesqui_product(const Array& s, const ProductPlan& plan) {
    const int m = plan.m;
    if (m < 1)
        throw ParameterError("multiplier must be positive");
    const DesignClassification d = classify(s);
    if (!d.rr || !d.rc)
        throw Refused("sesqui product needs constant row-row and row-column intersections");
    check_symbols(static_cast<long long>(s.symbols()) * m);
    if (!plan.orderings.empty() && plan.orderings.size() != s.cells().size())
        throw ParameterError("orderings must cover every cell of S");
    const int r = s.rows(), c = s.cols();
    Array out(r, c * m, s.symbols() * m);
    for (int j = 0; j < c; ++j)
        for (int i = 0; i < r; ++i) {
            const int base = s.at(i, j) * m;
            const std::vector<int>* ord =
                plan.orderings.empty() ? nullptr : &plan.orderings[static_cast<std::size_t>(j) * r + i];
            if (ord) {
                std::vector<int> sorted(*ord);
                std::sort(sorted.begin(), sorted.end());
                std::vector<int> ident(m);
                std::iota(ident.begin(), ident.end(), 0);
                if (sorted != ident)
                    throw ParameterError("ordering is not a permutation of the block");
            }
            for (int t = 0; t < m; ++t)
                out.set(i, j * m + t, static_cast<Symbol>(base + (ord ? (*ord)[t] : t)));
        }
    return out;
}

Array sesqui_product(const Array& s, int m) { return sesqui_product(s, ProductPlan{m, {}}); }

std::optional<Array> connected_sesqui_product(const Array& s, int m, int max_tries, std::uint64_t seed) {
    const std::size_t cells = s.cells().size();
    ProductPlan plan{m, std::vector<std::vector<int>>(cells, std::vector<int>(m))};
    auto rotate = [&](std::size_t cell, int shift) {
        for (int t = 0; t < m; ++t)
            plan.orderings[cell][t] = (t + shift) % m;
    };
    // First try: the k-th occurrence of each symbol is shifted by k.
    std::vector<int> seen(s.symbols(), 0);
    for (std::size_t idx = 0; idx < cells; ++idx)
        rotate(idx, seen[s.cells()[idx]]++ % m);
    std::mt19937_64 rng(seed);
    for (int attempt = 0; attempt < max_tries; ++attempt) {
        Array a = sesqui_product(s, plan);
        if (connectivity(a, Axis::columns))
            return a;
        for (std::size_t idx = 0; idx < cells; ++idx)
            rotate(idx, static_cast<int>(rng() % static_cast<std::uint64_t>(m)));
    }
    return std::nullopt;
}

Array mono_product(const Array& s, const Array& t, const std::vector<Array>& per_cell) {
    if (!classify(s).cc || !classify(t).cc)
        throw Refused("mono product needs constant column-column intersections in both factors");
    Array out = block_product(s, t, per_cell);
    if (!classify(out).cc)
        throw Error("mono product lost constant column intersections");
    return out;
}

Array ao_product(const Array& s, const Array& t, const std::vector<Array>& per_cell) {
    if (!classify(s).rc || !classify(t).rc)
        throw Refused("AO product needs constant row-column intersections in both factors");
    Array out = block_product(s, t, per_cell);
    if (!classify(out).rc)
        throw Error("AO product lost constant row-column intersections");
    return out;
}

Array latin_rectangle(int n, int rows, int cols) {
    if (cols < 0)
        cols = n;
    if (n < 1 || rows < 1 || cols < 1)
        throw ParameterError("Latin rectangle needs positive sizes");
    if (rows > n || cols > n)
        throw Refused("a Latin rectangle cannot have more rows or columns than symbols");
    if (n > max_symbols)
        throw Refused("too many symbols");
    Array a(rows, cols, n);
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < rows; ++i)
            a.set(i, j, static_cast<Symbol>((i + j) % n));
    return a;
}

Array cyclic_latin_square(int n) { return latin_rectangle(n, n, n); }

Array ao_for_params(int v, int r, int c) {
    if (v < 1 || r < 1 || c < 1)
        throw ParameterError("need positive v, r, c");
    if ((static_cast<long long>(r) * c) % v != 0)
        throw Refused("e = rc/v is not an integer");
    if (r > v || c > v)
        throw Refused("an AO-array needs r <= v and c <= v");
    int best_m = 0, best_n = 0;
    for (int m = 1; m <= v; ++m) {
        if (v % m || r % m)
            continue;
        const int n = v / m;
        if (c % n)
            continue;
        if (std::min(m, n) > std::min(best_m, best_n) || best_m == 0) {
            best_m = m;
            best_n = n;
        }
    }
    // m = gcd(v, r) always qualifies, so a factorization exists.
    const int m = best_m, n = best_n, a = r / m, b = c / n;
    const Array s = latin_rectangle(m, m, b);  // m x b on m symbols
    const Array t = latin_rectangle(n, a, n);  // a x n on n symbols
    return ao_product(s, t);
}

Array half_latin_ao(int k) {
    if (k < 1)
        throw ParameterError("k must be positive");
    const int n = 2 * k;
    if (2 * n > max_symbols)
        throw Refused("too many symbols");
    Array a(n, n, 2 * n);
    for (int i = 1; i <= n; ++i) {
        std::vector<bool> primed(n + 1, false);
        const int first = (i - 1) * k - (i - 2);
        for (int p = first; p < first + k; ++p)
            primed[((p - 1) % n + n) % n + 1] = true;
        for (int j = 1; j <= n; ++j) {
            const int s = (i - 1 + j - 1) % n + 1;
            a.set(i - 1, j - 1, static_cast<Symbol>(primed[j] ? n + s - 1 : s - 1));
        }
    }
    return a;
}

}  // namespace rcd
