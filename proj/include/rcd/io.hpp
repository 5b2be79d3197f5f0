#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rcd/array.hpp"

namespace rcd {

/// One array read from the text format.
///
///     v r c [YR]
///     #symbols <label_0> ... <label_{v-1}>     (optional)
///     r lines of c entries
///
/// Without a symbol table the entries are decimal indices; with one they
/// are labels from the table. Other lines starting with '#' are comments.
/// Arrays in a list are separated by blank lines.
struct ParsedArray {
    Array array;
    bool youden = false;
    std::vector<std::string> symbol_table;
};

std::vector<ParsedArray> parse_list(std::string_view text);

/// Exactly one array; throws StructuralError otherwise.
ParsedArray parse_single(std::string_view text);

std::string format_array(const Array& a, bool youden = false);
std::string format_list(std::span<const Array> arrays);

std::string read_file(const std::filesystem::path& path);

/// Writes through a temporary in the same directory, then renames.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace rcd
