#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "rcd/array.hpp"

namespace rcd {

/// The least isotope of an array under the Array ordering, with symbols
/// relabelled by first occurrence in the column-major scan.
struct CanonicalForm {
    Array array;
    /// Number of (row, column, symbol) permutation triples fixing the array.
    /// Assumes every symbol occurs at least once.
    std::uint64_t aut_order = 0;
};

CanonicalForm canonical(const Array& a);

/// True iff a equals its own canonical form. Exits at the first witness
/// of a smaller isotope, so it is much cheaper than canonical() on
/// non-canonical input.
bool is_canonical(const Array& a);

/// Autotopism group order of a when a is canonical, nullopt otherwise.
/// Same early exit as is_canonical().
std::optional<std::uint64_t> automorphisms_if_canonical(const Array& a);

/// False when the shapes differ.
bool is_isotopic(const Array& a, const Array& b);

struct TrisotopyClass {
    Array representative;  // min of the canonical forms of A and its transpose
    std::uint64_t aut_order = 0;  // autotrisotopism group order
    bool self_transpose = false;  // A is isotopic to its transpose
};

/// Classes under isotopism plus transposition. Inputs must be square and
/// pairwise non-isotopic; output is sorted by representative.
std::vector<TrisotopyClass> trisotopic_classes(std::span<const Array> arrays);

}  // namespace rcd
