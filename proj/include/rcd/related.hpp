#pragma once

#include <cstdint>
#include <vector>

#include "rcd/design.hpp"

namespace rcd {

/// A k x n array on n symbols is a Youden rectangle when it is binary and
/// any two columns share k(k-1)/(n-1) symbols.
bool is_youden_rectangle(const Array& y);

/// Drops column `col`, drops its symbols, and swaps the roles of columns
/// and symbols: cell (i, x) of the result holds the column where symbol x
/// sits in row i. Remaining columns and symbols are renumbered in order.
/// The result is k x (n-k) on n-1 symbols with constant column-column
/// intersection lambda. Refused unless y is a Youden rectangle.
Array youden_to_mono(const Array& y, int col);

/// Isotopism classes of (n, k) Youden rectangles as canonical arrays.
/// Empty when lambda is not an integer; refused for n > max_n.
std::vector<Array> enumerate_youden(int n, int k, int max_n = 8);

struct Coverage {
    std::uint64_t hit = 0;    // classes of the label produced from some rectangle and column
    std::uint64_t total = 0;  // all classes of the label at (n-1, k x (n-k))
};

Coverage youden_coverage(int n, int k, Label label, int max_n = 8);

/// Rows and columns, read as 2r blocks, form a BIBD: every symbol pair lies
/// in the same number of lines. Refused for non-square input.
bool is_pyd(const Array& a);

}  // namespace rcd
