#include "rcd/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <unordered_map>

namespace rcd {

namespace {

std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string_view::npos)
            nl = text.size();
        std::string_view line = text.substr(pos, nl - pos);
        if (!line.empty() && line.back() == '\r')
            line.remove_suffix(1);
        out.push_back(line);
        pos = nl + 1;
    }
    return out;
}

std::vector<std::string_view> tokens(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t'))
            ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t')
            ++j;
        if (j > i)
            out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

int to_int(std::string_view tok, int line_no) {
    int value = 0;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc() || p != tok.data() + tok.size())
        throw StructuralError("line " + std::to_string(line_no) + ": expected integer, got '" + std::string(tok) + "'");
    return value;
}

bool blank(std::string_view line) { return tokens(line).empty(); }

}  // namespace

std::vector<ParsedArray> parse_list(std::string_view text) {
    const auto lines = split_lines(text);
    std::vector<ParsedArray> out;
    std::size_t k = 0;
    auto skip = [&] {
        while (k < lines.size() && (blank(lines[k]) ||
                                    (lines[k].starts_with("#") && !lines[k].starts_with("#symbols"))))
            ++k;
    };
    for (;;) {
        skip();
        if (k >= lines.size())
            break;
        const int header_no = static_cast<int>(k) + 1;
        const auto head = tokens(lines[k++]);
        if (head.size() != 3 && !(head.size() == 4 && head[3] == "YR"))
            throw StructuralError("line " + std::to_string(header_no) + ": header must be 'v r c' or 'v r c YR'");
        ParsedArray parsed;
        parsed.youden = head.size() == 4;
        const int v = to_int(head[0], header_no);
        const int r = to_int(head[1], header_no);
        const int c = to_int(head[2], header_no);
        if (v < 0 || v > max_symbols || r < 0 || c < 0)
            throw StructuralError("line " + std::to_string(header_no) + ": dimension out of range");

        std::unordered_map<std::string, int> table;
        while (k < lines.size() && lines[k].starts_with("#")) {
            if (lines[k].starts_with("#symbols")) {
                auto toks = tokens(lines[k].substr(8));
                for (auto t : toks) {
                    if (!table.emplace(std::string(t), static_cast<int>(parsed.symbol_table.size())).second)
                        throw StructuralError("line " + std::to_string(k + 1) + ": duplicate symbol label '" +
                                              std::string(t) + "'");
                    parsed.symbol_table.emplace_back(t);
                }
                if (static_cast<int>(parsed.symbol_table.size()) < v)
                    throw StructuralError("line " + std::to_string(k + 1) + ": symbol table has " +
                                          std::to_string(parsed.symbol_table.size()) + " labels, need " +
                                          std::to_string(v));
            }
            ++k;
        }

        Array a(r, c, v);
        for (int i = 0; i < r; ++i, ++k) {
            if (k >= lines.size() || blank(lines[k]))
                throw StructuralError("array at line " + std::to_string(header_no) + ": expected " +
                                      std::to_string(r) + " rows, got " + std::to_string(i));
            const auto toks = tokens(lines[k]);
            if (static_cast<int>(toks.size()) != c)
                throw StructuralError("line " + std::to_string(k + 1) + ": expected " + std::to_string(c) +
                                      " entries, got " + std::to_string(toks.size()));
            for (int j = 0; j < c; ++j) {
                int s;
                if (table.empty()) {
                    s = to_int(toks[j], static_cast<int>(k) + 1);
                } else {
                    auto it = table.find(std::string(toks[j]));
                    if (it == table.end())
                        throw StructuralError("line " + std::to_string(k + 1) + ": unknown symbol label '" +
                                              std::string(toks[j]) + "'");
                    s = it->second;
                }
                if (s < 0 || s >= v)
                    throw StructuralError("line " + std::to_string(k + 1) + ": symbol " + std::to_string(s) +
                                          " outside 0.." + std::to_string(v - 1));
                a.set(i, j, static_cast<Symbol>(s));
            }
        }
        if (k < lines.size() && !blank(lines[k]))
            throw StructuralError("line " + std::to_string(k + 1) + ": array at line " + std::to_string(header_no) +
                                  " has more than " + std::to_string(r) + " rows");
        parsed.array = std::move(a);
        out.push_back(std::move(parsed));
    }
    return out;
}

ParsedArray parse_single(std::string_view text) {
    auto list = parse_list(text);
    if (list.size() != 1)
        throw StructuralError("expected exactly one array, found " + std::to_string(list.size()));
    return std::move(list.front());
}

std::string format_array(const Array& a, bool youden) {
    std::string out = std::to_string(a.symbols()) + " " + std::to_string(a.rows()) + " " + std::to_string(a.cols());
    if (youden)
        out += " YR";
    out += '\n';
    for (int i = 0; i < a.rows(); ++i) {
        for (int j = 0; j < a.cols(); ++j) {
            if (j)
                out += ' ';
            out += std::to_string(a.at(i, j));
        }
        out += '\n';
    }
    return out;
}

std::string format_list(std::span<const Array> arrays) {
    std::string out;
    for (std::size_t k = 0; k < arrays.size(); ++k) {
        if (k)
            out += '\n';
        out += format_array(arrays[k]);
    }
    return out;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw Error("cannot write " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out)
            throw Error("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace rcd
