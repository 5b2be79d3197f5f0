// Slow, independent reference implementations used only by the tests.
#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "rcd/array.hpp"
#include "rcd/io.hpp"

#ifndef RCD_TEST_DATA_DIR
#define RCD_TEST_DATA_DIR "tests/data"
#endif

namespace oracle {

inline rcd::Array load(const std::string& name) {
    return rcd::parse_single(rcd::read_file(std::string(RCD_TEST_DATA_DIR) + "/" + name)).array;
}

/// Every binary equireplicate r x c array on v symbols whose symbols are in
/// first-occurrence order along the column-major scan. `keep` may veto
/// complete arrays; `visit` receives the survivors.
inline void all_normalized(int v, int r, int c, const std::function<void(const rcd::Array&)>& visit) {
    if (v == 0 || (r * c) % v != 0)
        return;
    const int e = r * c / v;
    std::vector<int> cells(r * c, -1), count(v, 0);
    std::function<void(int, int)> rec = [&](int k, int used) {
        if (k == r * c) {
            for (int s = 0; s < v; ++s)
                if (count[s] != e)
                    return;
            std::vector<rcd::Symbol> cm(cells.begin(), cells.end());
            visit(rcd::Array(r, c, v, std::move(cm)));
            return;
        }
        const int j = k / r, i = k % r;
        const int top = std::min(used + 1, v);
        for (int s = 0; s < top; ++s) {
            if (count[s] == e)
                continue;
            bool clash = false;
            for (int ii = 0; ii < i && !clash; ++ii)
                clash = cells[j * r + ii] == s;
            for (int jj = 0; jj < j && !clash; ++jj)
                clash = cells[jj * r + i] == s;
            if (clash)
                continue;
            cells[k] = s;
            ++count[s];
            rec(k + 1, std::max(used, s + 1));
            --count[s];
            cells[k] = -1;
        }
    };
    rec(0, 0);
}

struct BruteCanon {
    rcd::Array array;
    std::uint64_t aut_order = 0;
    std::uint64_t distinct_images = 0;  // normalized arrays in the orbit
};

/// Minimum over all row and column permutations of the first-occurrence
/// relabelled array, counting permutations that attain it.
inline BruteCanon brute_canonical(const rcd::Array& a) {
    const int r = a.rows(), c = a.cols();
    std::vector<int> rp(r), cp(c), id(a.symbols());
    std::iota(id.begin(), id.end(), 0);
    std::iota(rp.begin(), rp.end(), 0);
    BruteCanon out;
    std::set<rcd::Array> images;
    bool first = true;
    do {
        std::iota(cp.begin(), cp.end(), 0);
        do {
            rcd::Array x = rcd::relabel_first_occurrence(rcd::permute(a, rp, cp, id));
            if (first || x < out.array) {
                out.array = x;
                out.aut_order = 1;
                first = false;
            } else if (x == out.array) {
                ++out.aut_order;
            }
            images.insert(std::move(x));
        } while (std::next_permutation(cp.begin(), cp.end()));
    } while (std::next_permutation(rp.begin(), rp.end()));
    out.distinct_images = images.size();
    return out;
}

inline std::uint64_t factorial(int n) {
    std::uint64_t f = 1;
    for (int i = 2; i <= n; ++i)
        f *= static_cast<std::uint64_t>(i);
    return f;
}

/// Random binary equireplicate array by randomized cell-by-cell backtracking.
inline rcd::Array random_valid(int v, int r, int c, std::mt19937_64& rng) {
    const int e = r * c / v;
    std::vector<int> cells(r * c, -1), count(v, 0);
    std::vector<int> order(v);
    std::iota(order.begin(), order.end(), 0);
    long budget = 0;
    std::function<bool(int)> rec = [&](int k) {
        if (k == r * c)
            return true;
        if (++budget > 200000)
            return false;
        const int j = k / r, i = k % r;
        std::vector<int> syms = order;
        std::shuffle(syms.begin(), syms.end(), rng);
        for (int s : syms) {
            if (count[s] == e)
                continue;
            bool clash = false;
            for (int ii = 0; ii < i && !clash; ++ii)
                clash = cells[j * r + ii] == s;
            for (int jj = 0; jj < j && !clash; ++jj)
                clash = cells[jj * r + i] == s;
            if (clash)
                continue;
            cells[k] = s;
            ++count[s];
            if (rec(k + 1))
                return true;
            --count[s];
            cells[k] = -1;
        }
        return false;
    };
    for (;;) {
        budget = 0;
        std::fill(cells.begin(), cells.end(), -1);
        std::fill(count.begin(), count.end(), 0);
        if (rec(0))
            break;
    }
    std::vector<rcd::Symbol> cm(cells.begin(), cells.end());
    return rcd::Array(r, c, v, std::move(cm));
}

/// Uniformly random isotope.
inline rcd::Array random_isotope(const rcd::Array& a, std::mt19937_64& rng) {
    std::vector<int> rp(a.rows()), cp(a.cols()), sp(a.symbols());
    std::iota(rp.begin(), rp.end(), 0);
    std::iota(cp.begin(), cp.end(), 0);
    std::iota(sp.begin(), sp.end(), 0);
    std::shuffle(rp.begin(), rp.end(), rng);
    std::shuffle(cp.begin(), cp.end(), rng);
    std::shuffle(sp.begin(), sp.end(), rng);
    return rcd::permute(a, rp, cp, sp);
}

}  // namespace oracle
