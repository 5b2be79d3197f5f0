#include "rcd/array.hpp"

#include <algorithm>

namespace rcd {

namespace {

void check_shape(int rows, int cols, int symbols) {
    if (rows < 0 || cols < 0)
        throw StructuralError("negative array dimension");
    if (symbols < 0 || symbols > max_symbols)
        throw StructuralError("symbol count must be in 0.." + std::to_string(max_symbols));
}

}  // namespace

Array::Array(int rows, int cols, int symbols)
    : rows_(rows), cols_(cols), symbols_(symbols),
      cells_(static_cast<std::size_t>(std::max(rows, 0)) * std::max(cols, 0), 0) {
    check_shape(rows, cols, symbols);
}

Array::Array(int rows, int cols, int symbols, std::vector<Symbol> column_major)
    : rows_(rows), cols_(cols), symbols_(symbols), cells_(std::move(column_major)) {
    check_shape(rows, cols, symbols);
    if (cells_.size() != static_cast<std::size_t>(rows) * cols)
        throw StructuralError("cell count " + std::to_string(cells_.size()) + " does not match " +
                              std::to_string(rows) + "x" + std::to_string(cols));
}

Array Array::from_rows(int symbols, const std::vector<std::vector<int>>& rows) {
    const int r = static_cast<int>(rows.size());
    const int c = r == 0 ? 0 : static_cast<int>(rows.front().size());
    Array a(r, c, symbols);
    for (int i = 0; i < r; ++i) {
        if (static_cast<int>(rows[i].size()) != c)
            throw StructuralError("row " + std::to_string(i) + " has " + std::to_string(rows[i].size()) +
                                  " entries, expected " + std::to_string(c));
        for (int j = 0; j < c; ++j) {
            const int s = rows[i][j];
            if (s < 0 || s > 255)
                throw StructuralError("symbol index out of representable range");
            a.set(i, j, static_cast<Symbol>(s));
        }
    }
    return a;
}

std::vector<Symbol> Array::row(int r) const {
    std::vector<Symbol> out(cols_);
    for (int j = 0; j < cols_; ++j)
        out[j] = at(r, j);
    return out;
}

void Array::push_column(std::span<const Symbol> col) {
    if (static_cast<int>(col.size()) != rows_)
        throw StructuralError("column length does not match row count");
    cells_.insert(cells_.end(), col.begin(), col.end());
    ++cols_;
}

void Array::pop_column() {
    if (cols_ == 0)
        return;
    cells_.resize(cells_.size() - rows_);
    --cols_;
}

std::strong_ordering operator<=>(const Array& a, const Array& b) {
    if (auto c = a.rows_ <=> b.rows_; c != 0)
        return c;
    if (auto c = a.cols_ <=> b.cols_; c != 0)
        return c;
    if (auto c = a.symbols_ <=> b.symbols_; c != 0)
        return c;
    return std::lexicographical_compare_three_way(a.cells_.begin(), a.cells_.end(), b.cells_.begin(),
                                                  b.cells_.end());
}

Array transpose(const Array& a) {
    Array t(a.cols(), a.rows(), a.symbols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            t.set(j, i, a.at(i, j));
    return t;
}

Array permute(const Array& a, std::span<const int> row_order, std::span<const int> col_order,
              std::span<const int> symbol_map) {
    Array out(a.rows(), a.cols(), a.symbols());
    for (int j = 0; j < a.cols(); ++j)
        for (int i = 0; i < a.rows(); ++i)
            out.set(i, j, static_cast<Symbol>(symbol_map[a.at(row_order[i], col_order[j])]));
    return out;
}

Array relabel_first_occurrence(const Array& a) {
    std::vector<int> label(256, -1);
    int next = 0;
    std::vector<Symbol> cells(a.cells().begin(), a.cells().end());
    for (auto& s : cells) {
        if (label[s] < 0)
            label[s] = next++;
        s = static_cast<Symbol>(label[s]);
    }
    return Array(a.rows(), a.cols(), a.symbols(), std::move(cells));
}

std::uint64_t hash_value(const Array& a) noexcept {
    // FNV-1a over the shape and cells.
    std::uint64_t h = 1469598103934665603ULL;
    auto mix = [&h](std::uint64_t byte) {
        h ^= byte;
        h *= 1099511628211ULL;
    };
    mix(static_cast<std::uint64_t>(a.rows()));
    mix(static_cast<std::uint64_t>(a.cols()));
    mix(static_cast<std::uint64_t>(a.symbols()));
    for (Symbol s : a.cells())
        mix(s);
    return h;
}

}  // namespace rcd
