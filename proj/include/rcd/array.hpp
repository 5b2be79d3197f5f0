#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace rcd {

using Symbol = std::uint8_t;

inline constexpr int max_symbols = 255;

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Malformed input: grid shape does not match its header, symbol table too
/// small, unparsable text.
class StructuralError : public Error {
  public:
    using Error::Error;
};

/// Parameters outside an operation's domain (r <= 1, i < 2, ...).
class ParameterError : public Error {
  public:
    using Error::Error;
};

/// An operation declined its input: wrong design class for a construction,
/// inadmissible target, search too large for the configured budget.
class Refused : public Error {
  public:
    using Error::Error;
};

/// An r x c grid of symbol indices in 0..v-1.
///
/// Cells are stored column by column. Arrays compare by (rows, cols,
/// symbols) and then by the column-major cell sequence; this is the total
/// order canonical forms minimise over.
class Array {
  public:
    Array() = default;
    Array(int rows, int cols, int symbols);
    Array(int rows, int cols, int symbols, std::vector<Symbol> column_major);

    /// Builds from a list of rows (the way arrays are usually printed).
    static Array from_rows(int symbols, const std::vector<std::vector<int>>& rows);

    int rows() const noexcept { return rows_; }
    int cols() const noexcept { return cols_; }
    int symbols() const noexcept { return symbols_; }
    bool empty() const noexcept { return cells_.empty(); }

    Symbol at(int row, int col) const { return cells_[static_cast<std::size_t>(col) * rows_ + row]; }
    void set(int row, int col, Symbol s) { cells_[static_cast<std::size_t>(col) * rows_ + row] = s; }

    std::span<const Symbol> column(int col) const {
        return {cells_.data() + static_cast<std::size_t>(col) * rows_, static_cast<std::size_t>(rows_)};
    }
    std::span<const Symbol> cells() const noexcept { return cells_; }

    std::vector<Symbol> row(int r) const;

    /// Appends a column; used by the column-by-column generators.
    void push_column(std::span<const Symbol> col);
    void pop_column();

    friend bool operator==(const Array&, const Array&) = default;
    friend std::strong_ordering operator<=>(const Array& a, const Array& b);

  private:
    int rows_ = 0;
    int cols_ = 0;
    int symbols_ = 0;
    std::vector<Symbol> cells_;
};

Array transpose(const Array& a);

/// Applies an isotopism: new(i, j) = sym[old(row[i], col[j])].
Array permute(const Array& a, std::span<const int> row_order, std::span<const int> col_order,
              std::span<const int> symbol_map);

/// Relabels symbols in order of first occurrence along the column-major scan.
Array relabel_first_occurrence(const Array& a);

/// Stable digest for content-addressed sets.
std::uint64_t hash_value(const Array& a) noexcept;

struct ArrayHash {
    std::size_t operator()(const Array& a) const noexcept { return static_cast<std::size_t>(hash_value(a)); }
};

}  // namespace rcd
