#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rcd/array.hpp"

namespace rcd {

/// Sesqui product: each symbol s of S becomes a run of m cells holding the
/// fresh block {s*m, ..., s*m + m - 1}.
struct ProductPlan {
    int m = 1;
    /// Optional per-cell ordering of the block, indexed by the column-major
    /// cell index of S; each entry is a permutation of 0..m-1. Empty means
    /// the same order at every occurrence.
    std::vector<std::vector<int>> orderings;
};

/// r x mc sesqui array from an r x c sesqui array (RR and RC constant,
/// proper or not). Throws Refused when S is not a sesqui array.
Array sesqui_product(const Array& s, const ProductPlan& plan);
Array sesqui_product(const Array& s, int m);

/// Bounded search over cyclic shifts of the blocks for a sesqui product
/// whose column design is connected. nullopt when none is found.
std::optional<Array> connected_sesqui_product(const Array& s, int m, int max_tries = 10000,
                                              std::uint64_t seed = 1);

/// ra x bc product: cell (i, j) of S holding symbol s becomes a copy of T
/// on the symbol block {s*v_T, ...}. `per_cell` optionally supplies, for
/// each column-major cell of S, an isotope of T to use there.
///
/// Mono product needs CC constant in both factors, AO product RC constant.
/// Inputs of the wrong class are refused; outputs are checked by the
/// classifier.
Array mono_product(const Array& s, const Array& t, const std::vector<Array>& per_cell = {});
Array ao_product(const Array& s, const Array& t, const std::vector<Array>& per_cell = {});

/// rows x cols cyclic rectangle on n symbols, cell (i, j) = (i + j) mod n.
/// cols defaults to n. Refused unless rows, cols <= n.
Array latin_rectangle(int n_symbols, int n_rows, int n_cols = -1);
Array cyclic_latin_square(int n);

/// AO-array for any (v, r, c) with integral e and max(r, c) <= v: the AO
/// product of an m x b and an a x n Latin rectangle, v = mn, r = am,
/// c = bn, with min(m, n) as large as possible.
Array ao_for_params(int v, int r, int c);

/// 2k x 2k AO-array on 4k symbols from the cyclic Latin square of order
/// 2k: in row i (1-based), positions (i-1)k-(i-2) .. ik-(i-1) mod 2k get
/// primed symbols. Unprimed s maps to s-1, primed s to 2k+s-1.
Array half_latin_ao(int k);

}  // namespace rcd
