#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <openssl/evp.h>

#include "CLI11.hpp"
#include "json.hpp"

#include "rcd/canonical.hpp"
#include "rcd/constructions.hpp"
#include "rcd/design.hpp"
#include "rcd/enumerate.hpp"
#include "rcd/heuristic.hpp"
#include "rcd/io.hpp"
#include "rcd/params.hpp"
#include "rcd/related.hpp"
#include "rcd/report_json.hpp"
#include "rcd/satgen.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* tool_version = "1.0.0";

enum ExitCode { exit_ok = 0, exit_failure = 1, exit_usage = 2, exit_refused = 3 };

/// Caller misuse that CLI11 cannot see (missing option combinations).
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The run ended on a budget or refusal; the diagnostic goes to stderr.
struct RefusedExit : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string sha256_hex(std::string_view data) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("SHA-256 failed");
    std::ostringstream out;
    for (unsigned int i = 0; i < len; ++i)
        out << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
    return out.str();
}

std::string utc_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

struct Session {
    std::string format = "text";
    int jobs = 1;
    std::string out_dir;
    std::string manifest_path;
    std::vector<std::string> argv;
    std::string command;
    std::optional<std::uint64_t> seed;
    json inputs = json::array();
    json outputs = json::array();
    json extra = json::object();
    std::string stdout_text;

    bool as_json() const { return format == "json"; }

    std::string read_input(const std::string& path) {
        std::string content = rcd::read_file(path);
        inputs.push_back({{"path", path}, {"sha256", sha256_hex(content)}});
        return content;
    }

    fs::path out_path(const std::string& name) const { return out_dir.empty() ? fs::path(name) : fs::path(out_dir) / name; }

    void write_output(const fs::path& path, const std::string& content) {
        if (path.has_parent_path())
            fs::create_directories(path.parent_path());
        rcd::write_file_atomic(path, content);
        outputs.push_back({{"path", path.string()}, {"sha256", sha256_hex(content)}, {"bytes", content.size()}});
    }

    void print(const std::string& s) { stdout_text += s; }
    void print_json(const json& j) { stdout_text += j.dump() + "\n"; }
};

rcd::Array read_array(Session& s, const std::string& path, bool* youden = nullptr) {
    rcd::ParsedArray p = rcd::parse_single(s.read_input(path));
    if (youden)
        *youden = p.youden;
    return p.array;
}

rcd::Label label_option(const std::string& name) {
    auto l = rcd::parse_label(name);
    if (!l)
        throw UsageError("unknown label '" + name + "' (TA DA SA SAT MA MAT AO)");
    return *l;
}

std::string rational_text(const rcd::Rational& q) {
    return q.denominator() == 1 ? std::to_string(q.numerator())
                                : std::to_string(q.numerator()) + "/" + std::to_string(q.denominator());
}

// ---------------------------------------------------------------- tables

const rcd::Label table_columns[] = {rcd::Label::MA, rcd::Label::SAT, rcd::Label::MAT, rcd::Label::SA,
                                    rcd::Label::DA, rcd::Label::TA,  rcd::Label::AO};

/// Default cell: '-' when a forced property excludes a proper design, '+'
/// when admissible, blank otherwise.
std::string skeleton_cell(const rcd::ParameterSet& p, rcd::Label l) {
    if (!p.divisibility_admits(l))
        return "";
    return p.dashed(l) ? "-" : "+";
}

struct TableRow {
    rcd::ParameterSet p;
    std::map<rcd::Label, std::string> cells;
};

std::string render_table(const std::vector<TableRow>& rows) {
    std::vector<std::vector<std::string>> grid;
    std::vector<std::string> head = {"v", "e", "r x c"};
    for (rcd::Label l : table_columns)
        head.emplace_back(rcd::label_name(l));
    grid.push_back(head);
    for (const TableRow& row : rows) {
        std::vector<std::string> line = {std::to_string(row.p.v), rational_text(row.p.e),
                                         std::to_string(row.p.r) + " x " + std::to_string(row.p.c)};
        for (rcd::Label l : table_columns) {
            auto it = row.cells.find(l);
            line.push_back(it != row.cells.end() ? it->second : skeleton_cell(row.p, l));
        }
        grid.push_back(line);
    }
    std::vector<std::size_t> width(head.size(), 0);
    for (const auto& line : grid)
        for (std::size_t k = 0; k < line.size(); ++k)
            width[k] = std::max(width[k], line[k].size());
    std::ostringstream out;
    for (const auto& line : grid) {
        std::string text;
        for (std::size_t k = 0; k < line.size(); ++k) {
            if (k)
                text += "  ";
            text += std::string(width[k] - line[k].size(), ' ') + line[k];
        }
        while (!text.empty() && text.back() == ' ')
            text.pop_back();
        out << text << "\n";
    }
    return out.str();
}

// ---------------------------------------------------------------- params

json bibd_json(const std::optional<rcd::BIBDParams>& b, rcd::Existence hint) {
    if (!b)
        return nullptr;
    return {{"points", b->points},           {"blocks", b->blocks},
            {"replication", b->replication}, {"block_size", b->block_size},
            {"pair_count", b->pair_count},   {"existence", std::string(rcd::existence_name(hint))}};
}

int run_params(Session& s, int vmax, std::optional<int> v, std::optional<int> r, std::optional<int> c,
               std::optional<int> small_v, const std::string& relax, const std::string& bibd_table) {
    rcd::BIBDTable table;
    if (!bibd_table.empty()) {
        s.read_input(bibd_table);
        table.load(bibd_table);
    }
    std::vector<rcd::ParameterSet> sets;
    if (v || r || c) {
        if (!(v && r && c))
            throw UsageError("--v, --r and --c go together");
        sets.push_back(rcd::derive(*v, *r, *c));
    } else if (small_v) {
        static const std::map<std::string, rcd::SmallVRelaxation> relaxations = {
            {"double-triple", rcd::SmallVRelaxation::double_triple},
            {"cc-side", rcd::SmallVRelaxation::cc_side},
            {"rr-side", rcd::SmallVRelaxation::rr_side},
            {"ao", rcd::SmallVRelaxation::ao}};
        sets = rcd::search_small_v(*small_v, relaxations.at(relax));
    } else {
        sets = rcd::enumerate_admissible(vmax);
    }
    if (s.as_json()) {
        for (const auto& p : sets) {
            json j = rcd::params_json(p);
            const rcd::ComponentBIBDs comp = rcd::component_bibds(p, table);
            j["bibd_r"] = bibd_json(comp.row, comp.row_hint);
            j["bibd_c"] = bibd_json(comp.col, comp.col_hint);
            s.print_json(j);
        }
    } else {
        std::vector<TableRow> rows;
        for (const auto& p : sets)
            rows.push_back({p, {}});
        s.print(render_table(rows));
        if (sets.empty())
            s.print("(no parameter sets)\n");
    }
    return exit_ok;
}

// ---------------------------------------------------------------- enumerate

rcd::SearchMode mode_option(const std::string& m) {
    static const std::map<std::string, rcd::SearchMode> aliases = {
        {"cc", rcd::SearchMode::constant_columns},
        {"rr", rcd::SearchMode::constant_rows},
        {"lines", rcd::SearchMode::constant_lines},
        {"ao", rcd::SearchMode::adjusted_orthogonal},
        {"any", rcd::SearchMode::any}};
    if (auto it = aliases.find(m); it != aliases.end())
        return it->second;
    if (auto parsed = rcd::parse_mode(m))
        return *parsed;
    throw UsageError("unknown mode '" + m + "'");
}

std::string checkpoint_name(const rcd::SearchTarget& t) {
    std::string name = "v" + std::to_string(t.v) + "_r" + std::to_string(t.r) + "_c" + std::to_string(t.c) + "_" +
                       std::string(rcd::mode_name(t.mode));
    if (t.require_rr)
        name += "_rr";
    if (t.require_cc)
        name += "_cc";
    if (t.require_rc)
        name += "_rc";
    if (t.force)
        name += "_force";
    return name + ".ckpt";
}

std::string representatives_text(const rcd::EnumerationReport& rep, const std::set<rcd::Label>& keep) {
    std::string out;
    for (const auto& [label, list] : rep.representatives) {
        if (!keep.empty() && !keep.count(label))
            continue;
        for (const auto& r : list) {
            if (!out.empty())
                out += "\n";
            out += "# label=" + std::string(rcd::label_name(label)) + " aut=" + std::to_string(r.aut_order) + "\n";
            out += rcd::format_array(r.array);
        }
    }
    return out;
}

struct EnumerateOptions {
    int v = 0, r = 0, c = 0;
    std::string mode = "cc";
    std::vector<std::string> require;
    std::vector<std::string> labels;
    std::uint64_t budget = 500'000'000;
    std::string checkpoint;
    bool no_checkpoint = false;
    bool force = false;
    std::string oracle = "orderly";
    bool timing = false;
};

int run_enumerate(Session& s, const EnumerateOptions& o) {
    rcd::SearchTarget t;
    t.v = o.v;
    t.r = o.r;
    t.c = o.c;
    t.mode = mode_option(o.mode);
    for (const auto& q : o.require) {
        if (q == "rr")
            t.require_rr = true;
        else if (q == "cc")
            t.require_cc = true;
        else if (q == "rc")
            t.require_rc = true;
        else
            throw UsageError("--require takes rr, cc or rc");
    }
    std::set<rcd::Label> keep;
    for (const auto& l : o.labels)
        keep.insert(label_option(l));
    t.node_budget = o.budget;
    t.jobs = s.jobs;
    t.force = o.force;
    if (!o.no_checkpoint && o.oracle == "orderly") {
        if (!o.checkpoint.empty()) {
            t.checkpoint = o.checkpoint;
        } else if (const char* dir = std::getenv("RCD_CHECKPOINT_DIR"); dir && *dir) {
            fs::create_directories(dir);
            t.checkpoint = fs::path(dir) / checkpoint_name(t);
        }
    }
    if (t.checkpoint)
        s.extra["checkpoint"] = t.checkpoint->string();
    const rcd::EnumerationReport rep = o.oracle == "sdr" ? rcd::enumerate_via_sdr(t) : rcd::enumerate(t);

    json j = rcd::report_json(rep, o.timing);
    if (!s.out_dir.empty()) {
        const fs::path reps = s.out_path("representatives.txt");
        s.write_output(reps, representatives_text(rep, keep));
        s.write_output(s.out_path("report.json"), j.dump(2) + "\n");
    }
    if (s.as_json()) {
        s.print_json(j);
    } else {
        std::ostringstream out;
        out << "target v=" << t.v << " r=" << t.r << " c=" << t.c << " mode=" << rcd::mode_name(t.mode) << "\n";
        out << "status " << rcd::status_name(rep.status);
        if (!rep.reason.empty())
            out << " (" << rep.reason << ")";
        out << "\n";
        for (const auto& [label, n] : rep.counts) {
            if (!keep.empty() && !keep.count(label))
                continue;
            out << std::left << std::setw(5) << rcd::label_name(label) << std::right << std::setw(10) << n;
            if (auto it = rep.histogram.find(label); it != rep.histogram.end()) {
                out << "   |Aut|:";
                for (const auto& [order, m] : it->second)
                    out << " " << order << "x" << m;
            }
            out << "\n";
        }
        out << "total " << rep.total() << "  nodes " << rep.stats.nodes << "  units " << rep.stats.units << "\n";
        if (o.timing)
            out << "wall " << rep.stats.wall_seconds << " s\n";
        if (s.out_dir.empty())
            out << "\n" << representatives_text(rep, keep);
        s.print(out.str());
    }
    if (rep.status == rcd::RunStatus::refused)
        throw RefusedExit("enumerate refused: " + rep.reason);
    if (rep.status == rcd::RunStatus::budget_exceeded)
        throw RefusedExit("enumerate stopped at the node budget (" + std::to_string(o.budget) +
                          "); counts are partial. Raise --budget or use 0 for no limit.");
    return exit_ok;
}

// ---------------------------------------------------------------- construct

/// Writes the array to --output, or to <out-dir>/<default_name>, or stdout.
int emit_array(Session& s, const std::string& construction, const rcd::Array& a, const std::string& output,
               const std::string& default_name, bool youden = false) {
    std::string path;
    if (!output.empty())
        path = output;
    else if (!s.out_dir.empty())
        path = s.out_path(default_name).string();
    const std::string text = rcd::format_array(a, youden);
    if (!path.empty())
        s.write_output(path, text);
    const rcd::ValidationReport val = rcd::validate(a);
    if (s.as_json()) {
        json j = {{"construction", construction}, {"array", rcd::array_json(a)}, {"valid", val.ok()}};
        j["classification"] = val.ok() ? rcd::classification_json(rcd::classify(a)) : json(nullptr);
        j["output"] = path.empty() ? json(nullptr) : json(path);
        s.print_json(j);
    } else {
        if (path.empty())
            s.print(text);
        else
            s.print("wrote " + path + "\n");
        if (val.ok())
            s.print("# " + std::string(rcd::label_name(rcd::classify(a).label)) + "\n");
    }
    return exit_ok;
}

// ---------------------------------------------------------------- search

int run_search(Session& s, int v, int r, int c, const std::string& target, std::uint64_t seed, int restarts,
               std::uint64_t steps, const std::string& output) {
    s.seed = seed;
    const rcd::Label label = label_option(target);
    const rcd::LocalSearchResult res = rcd::local_search(v, r, c, label, seed, restarts, steps, s.jobs);
    std::string path;
    if (res.found) {
        path = !output.empty() ? output : s.out_dir.empty() ? "" : s.out_path("found.txt").string();
        if (!path.empty())
            s.write_output(path, rcd::format_array(*res.array));
    }
    if (s.as_json()) {
        json j = {{"v", v},
                  {"r", r},
                  {"c", c},
                  {"target", target},
                  {"seed", seed},
                  {"found", res.found},
                  {"proper", res.proper},
                  {"restarts", res.restarts},
                  {"moves", res.moves},
                  {"best_violations", res.best_violations}};
        j["array"] = res.found ? rcd::array_json(*res.array) : json(nullptr);
        j["classification"] = res.found ? rcd::classification_json(res.classification) : json(nullptr);
        j["output"] = path.empty() ? json(nullptr) : json(path);
        s.print_json(j);
    } else {
        std::ostringstream out;
        out << (res.found ? "found" : "exhausted") << " after " << res.restarts << " restarts, " << res.moves
            << " moves; best violations " << res.best_violations << "\n";
        if (res.found) {
            out << "classified " << rcd::label_name(res.classification.label) << (res.proper ? " (proper)" : "")
                << "\n";
            if (path.empty())
                out << rcd::format_array(*res.array);
            else
                out << "wrote " << path << "\n";
        }
        s.print(out.str());
    }
    if (!res.found)
        throw RefusedExit("search budget exhausted without reaching the target");
    return exit_ok;
}

// ---------------------------------------------------------------- sat

struct ModelOptions {
    int v = 0, r = 0, c = 0;
    std::string label;
    bool improper = false;
    bool no_symmetry_breaking = false;
};

rcd::PBModel build(const ModelOptions& m) {
    return rcd::build_model(m.v, m.r, m.c, label_option(m.label), !m.improper, !m.no_symmetry_breaking);
}

int run_sat_emit(Session& s, const ModelOptions& mo, const std::string& encoding, const std::string& output) {
    const rcd::PBModel m = build(mo);
    std::string text;
    int total_vars = m.num_vars;
    std::size_t rows = m.constraints.size();
    if (encoding == "opb") {
        text = rcd::to_opb(m);
    } else {
        const rcd::CNFFormula f = rcd::to_cnf_formula(m);
        text = rcd::to_dimacs(f, m);
        total_vars = f.num_vars;
        rows = f.clauses.size();
    }
    const fs::path path = !output.empty() ? fs::path(output)
                                          : s.out_path("model-v" + std::to_string(m.v) + "-r" + std::to_string(m.r) +
                                                       "-c" + std::to_string(m.c) + "-" + mo.label + "." +
                                                       encoding);
    fs::path map = path;
    map += ".map.json";
    s.write_output(path, text);
    s.write_output(map, rcd::sidecar_json(m, encoding, total_vars));
    if (s.as_json()) {
        s.print_json({{"model", path.string()},
                      {"sidecar", map.string()},
                      {"encoding", encoding},
                      {"variables", total_vars},
                      {encoding == "opb" ? "constraints" : "clauses", rows}});
    } else {
        s.print("wrote " + path.string() + " (" + std::to_string(total_vars) + " variables, " + std::to_string(rows) +
                (encoding == "opb" ? " constraints)\n" : " clauses)\n"));
        s.print("wrote " + map.string() + "\n");
    }
    return exit_ok;
}

int run_sat_solve(Session& s, const ModelOptions& mo, std::uint64_t budget) {
    const rcd::PBModel m = build(mo);
    const rcd::SolveResult res = rcd::naive_solve(m, budget);
    if (s.as_json()) {
        json j = {{"v", m.v},
                  {"r", m.r},
                  {"c", m.c},
                  {"label", mo.label},
                  {"proper", m.proper},
                  {"status", std::string(rcd::solve_status_name(res.status))},
                  {"nodes", res.nodes}};
        j["array"] = res.array ? rcd::array_json(*res.array) : json(nullptr);
        j["classification"] = res.array ? rcd::classification_json(rcd::classify(*res.array)) : json(nullptr);
        s.print_json(j);
    } else {
        s.print(std::string(rcd::solve_status_name(res.status)) + " after " + std::to_string(res.nodes) +
                " decisions\n");
        if (res.array)
            s.print(rcd::format_array(*res.array) + "# " +
                    std::string(rcd::label_name(rcd::classify(*res.array).label)) + "\n");
    }
    if (res.status == rcd::SolveStatus::budget_exceeded)
        throw RefusedExit("solver stopped at the decision budget");
    return exit_ok;
}

int run_sat_validate(Session& s, const std::string& input) {
    const rcd::OPBCheck chk = rcd::validate_opb(s.read_input(input));
    if (s.as_json())
        s.print_json({{"ok", chk.ok},
                      {"variables", chk.variables},
                      {"constraints", chk.constraints},
                      {"message", chk.message}});
    else
        s.print(std::string(chk.ok ? "ok" : "invalid") + ": " + std::to_string(chk.variables) + " variables, " +
                std::to_string(chk.constraints) + " constraints" +
                (chk.message.empty() ? "" : " (" + chk.message + ")") + "\n");
    return chk.ok ? exit_ok : exit_failure;
}

// ---------------------------------------------------------------- youden / pyd

int run_youden_enumerate(Session& s, int n, int k, int max_n, const std::string& output) {
    const std::vector<rcd::Array> list = rcd::enumerate_youden(n, k, max_n);
    std::string text;
    for (const auto& y : list) {
        if (!text.empty())
            text += "\n";
        text += rcd::format_array(y, true);
    }
    std::string path = !output.empty() ? output : s.out_dir.empty() ? "" : s.out_path("youden.txt").string();
    if (!path.empty())
        s.write_output(path, text);
    const rcd::Rational lambda(static_cast<std::int64_t>(k) * (k - 1), n - 1);
    if (s.as_json()) {
        json arrays = json::array();
        for (const auto& y : list)
            arrays.push_back(rcd::array_json(y));
        json j = {{"n", n}, {"k", k}, {"lambda", rcd::rational_json(lambda)}, {"count", list.size()},
                  {"rectangles", std::move(arrays)}};
        j["output"] = path.empty() ? json(nullptr) : json(path);
        s.print_json(j);
    } else {
        s.print(std::to_string(list.size()) + " isotopism classes of (" + std::to_string(n) + "," +
                std::to_string(k) + "," + rational_text(lambda) + ") Youden rectangles\n");
        s.print(path.empty() ? text : "wrote " + path + "\n");
    }
    return exit_ok;
}

int run_youden_coverage(Session& s, int n, int k, std::vector<std::string> labels, int max_n) {
    if (labels.empty())
        labels = {"TA", "DA", "SAT", "MA"};
    std::vector<std::pair<std::string, rcd::Coverage>> rows;
    for (const auto& name : labels)
        rows.emplace_back(name, rcd::youden_coverage(n, k, label_option(name), max_n));
    for (const auto& [name, cov] : rows) {
        if (s.as_json())
            s.print_json({{"n", n}, {"k", k}, {"label", name}, {"hit", cov.hit}, {"total", cov.total}});
        else
            s.print(name + " " + std::to_string(cov.hit) + "/" + std::to_string(cov.total) + "\n");
    }
    return exit_ok;
}

int run_pyd_params(Session& s, int vmax) {
    const auto sets = rcd::pyd_admissible_search(vmax);
    if (!s.as_json())
        s.print("    v     r     e  lambda  series\n");
    for (const auto& p : sets) {
        if (s.as_json()) {
            json j = {{"v", p.v}, {"r", p.r}, {"e", p.e}, {"lambda_bibd", rcd::rational_json(p.lambda_bibd)}};
            j["series_index"] = p.series_index ? json(*p.series_index) : json(nullptr);
            s.print_json(j);
        } else {
            std::ostringstream out;
            out << std::setw(5) << p.v << " " << std::setw(5) << p.r << " " << std::setw(5) << p.e << " "
                << std::setw(7) << rational_text(p.lambda_bibd) << "  "
                << (p.series_index ? std::to_string(*p.series_index) : "") << "\n";
            s.print(out.str());
        }
    }
    return exit_ok;
}

// ---------------------------------------------------------------- report

int run_report(Session& s, const std::vector<std::string>& inputs, int vmax) {
    std::map<std::tuple<int, int, int>, TableRow> rows;
    if (vmax > 0)
        for (const auto& p : rcd::enumerate_admissible(vmax))
            rows[{p.v, p.r, p.c}] = {p, {}};
    for (const auto& path : inputs) {
        const rcd::EnumerationReport rep = rcd::report_from_json(json::parse(s.read_input(path)));
        const rcd::SearchTarget& t = rep.target;
        auto [it, fresh] = rows.try_emplace({t.v, t.r, t.c});
        if (fresh)
            it->second.p = rcd::derive(t.v, t.r, t.c);
        if (rep.status == rcd::RunStatus::refused)
            continue;
        for (rcd::Label l : table_columns) {
            if (!rcd::counts_label(t, l) || it->second.p.dashed(l) || !it->second.p.divisibility_admits(l))
                continue;
            it->second.cells[l] =
                rep.status == rcd::RunStatus::complete ? std::to_string(rep.count(l)) : std::string("EX");
        }
    }
    std::vector<TableRow> list;
    for (auto& [key, row] : rows)
        list.push_back(row);
    std::stable_sort(list.begin(), list.end(), [](const TableRow& a, const TableRow& b) {
        if (a.p.v != b.p.v)
            return a.p.v < b.p.v;
        return a.p.e < b.p.e;
    });
    if (s.as_json()) {
        for (const auto& row : list) {
            json cells = json::object();
            for (rcd::Label l : table_columns) {
                auto it = row.cells.find(l);
                cells[std::string(rcd::label_name(l))] = it != row.cells.end() ? it->second : skeleton_cell(row.p, l);
            }
            s.print_json({{"v", row.p.v},
                          {"r", row.p.r},
                          {"c", row.p.c},
                          {"e", rcd::rational_json(row.p.e)},
                          {"cells", std::move(cells)}});
        }
    } else {
        s.print(render_table(list));
    }
    return exit_ok;
}

// ---------------------------------------------------------------- manifest

void write_manifest(Session& s, int status, const std::string& started, const std::string& resolved) {
    if (s.manifest_path.empty())
        s.manifest_path = s.out_path("rcd-manifest.json").string();
    json outputs = s.outputs;
    outputs.push_back({{"path", "<stdout>"}, {"sha256", sha256_hex(s.stdout_text)}, {"bytes", s.stdout_text.size()}});
    json m = {{"tool", "rcd"},
              {"version", tool_version},
              {"command", s.command},
              {"argv", s.argv},
              {"resolved_options", resolved},
              {"format", s.format},
              {"jobs", s.jobs},
              {"inputs", s.inputs},
              {"outputs", std::move(outputs)},
              {"started", started},
              {"finished", utc_now()},
              {"exit_status", status}};
    m["seed"] = s.seed ? json(*s.seed) : json(nullptr);
    for (const auto& [k, val] : s.extra.items())
        m[k] = val;
    const fs::path path(s.manifest_path);
    if (path.has_parent_path())
        fs::create_directories(path.parent_path());
    rcd::write_file_atomic(path, m.dump(2) + "\n");
}

}  // namespace

int main(int argc, char** argv) {
    Session s;
    const std::string started = utc_now();
    for (int i = 1; i < argc; ++i)
        s.argv.emplace_back(argv[i]);
    s.jobs = std::max(1u, std::thread::hardware_concurrency());

    CLI::App app{"Row-column design toolkit: parameters, enumeration, constructions, search, SAT models."};
    app.set_version_flag("--version", tool_version);
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--format", s.format, "Output format")->check(CLI::IsMember({"text", "json"}))->capture_default_str();
    app.add_option("--jobs", s.jobs, "Worker threads (results do not depend on it)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--out", s.out_dir, "Directory for output files");
    app.add_option("--manifest", s.manifest_path, "Manifest path (default <out>/rcd-manifest.json)");

    // params
    auto* params = app.add_subcommand("params", "Admissible parameter sets and their label skeleton");
    int vmax = 14;
    std::optional<int> pv, pr, pc, small_v;
    std::string relax = "double-triple", bibd_table;
    params->add_option("--vmax", vmax, "Largest v for the admissibility scan")->capture_default_str();
    params->add_option("--v", pv, "Single set: number of symbols");
    params->add_option("--r", pr, "Single set: rows");
    params->add_option("--c", pc, "Single set: columns");
    params->add_option("--small-v", small_v, "Search v < r + c - 1 up to this v");
    params->add_option("--relax", relax, "Family for --small-v")
        ->check(CLI::IsMember({"double-triple", "cc-side", "rr-side", "ao"}))
        ->capture_default_str();
    params->add_option("--bibd-table", bibd_table, "Extra BIBD existence table")->check(CLI::ExistingFile);

    // enumerate
    auto* en = app.add_subcommand("enumerate", "Isotopism classes of designs");
    EnumerateOptions eo;
    en->add_option("--v", eo.v, "Symbols")->required();
    en->add_option("--r", eo.r, "Rows")->required();
    en->add_option("--c", eo.c, "Columns")->required();
    en->add_option("--mode", eo.mode, "cc, rr, lines, ao or any")->capture_default_str();
    en->add_option("--require", eo.require, "Extra constant families: rr, cc, rc")->delimiter(',');
    en->add_option("--label", eo.labels, "Only write representatives of these labels")->delimiter(',');
    en->add_option("--budget", eo.budget, "Partial-array budget, 0 for none")->capture_default_str();
    en->add_option("--checkpoint", eo.checkpoint, "Checkpoint file (default from RCD_CHECKPOINT_DIR)");
    en->add_flag("--no-checkpoint", eo.no_checkpoint, "Ignore RCD_CHECKPOINT_DIR");
    en->add_flag("--force", eo.force, "Search even when divisibility rules the target out");
    en->add_option("--oracle", eo.oracle, "Generator")->check(CLI::IsMember({"orderly", "sdr"}))->capture_default_str();
    en->add_flag("--timing", eo.timing, "Include wall time (makes output non-deterministic)");

    // construct
    auto* con = app.add_subcommand("construct", "Constructions");
    con->require_subcommand(1);
    std::string output, in_s, in_t;
    int m = 2, k = 0, n = 0, rows = 0, cols = -1, tries = 10000;
    int av = 0, ar = 0, ac = 0;
    std::uint64_t seed = 1;
    bool connected = false;
    auto add_output = [&](CLI::App* sub) { sub->add_option("--output", output, "Output array file"); };
    auto* c_sesqui = con->add_subcommand("sesqui", "Sesqui product of a sesqui array");
    c_sesqui->add_option("--input", in_s, "Sesqui array file")->required()->check(CLI::ExistingFile);
    c_sesqui->add_option("--m", m, "Block size")->capture_default_str();
    c_sesqui->add_flag("--connected", connected, "Search block orderings for a connected product");
    c_sesqui->add_option("--tries", tries, "Orderings tried with --connected")->capture_default_str();
    c_sesqui->add_option("--seed", seed, "Seed for --connected")->capture_default_str();
    add_output(c_sesqui);
    auto* c_mono = con->add_subcommand("mono", "Mono product S x T");
    auto* c_ao = con->add_subcommand("ao", "AO product S x T");
    for (auto* sub : {c_mono, c_ao}) {
        sub->add_option("--s", in_s, "Outer array file")->required()->check(CLI::ExistingFile);
        sub->add_option("--t", in_t, "Inner array file")->required()->check(CLI::ExistingFile);
        add_output(sub);
    }
    auto* c_aop = con->add_subcommand("ao-params", "AO-array from Latin rectangles for given parameters");
    c_aop->add_option("--v", av)->required();
    c_aop->add_option("--r", ar)->required();
    c_aop->add_option("--c", ac)->required();
    add_output(c_aop);
    auto* c_half = con->add_subcommand("half-latin-ao", "2k x 2k AO-array on 4k symbols");
    c_half->add_option("--k", k)->required();
    add_output(c_half);
    auto* c_latin = con->add_subcommand("latin", "Cyclic Latin rectangle");
    c_latin->add_option("--n", n, "Symbols")->required();
    c_latin->add_option("--rows", rows)->required();
    c_latin->add_option("--cols", cols, "Defaults to n");
    add_output(c_latin);
    auto* c_cyclic = con->add_subcommand("cyclic", "Cyclic Latin square");
    c_cyclic->add_option("--n", n)->required();
    add_output(c_cyclic);

    // search
    auto* se = app.add_subcommand("search", "Local search for a design of a given label");
    int sv = 0, sr = 0, sc = 0, restarts = 100;
    std::uint64_t steps = 200000;
    std::string target;
    se->add_option("--v", sv)->required();
    se->add_option("--r", sr)->required();
    se->add_option("--c", sc)->required();
    se->add_option("--target", target, "Label: TA DA SA SAT MA MAT AO")->required();
    se->add_option("--seed", seed, "Base seed; restart t uses seed + t")->capture_default_str();
    se->add_option("--restarts", restarts, "Restart budget")->capture_default_str();
    se->add_option("--steps", steps, "Swap evaluations per restart")->capture_default_str();
    add_output(se);

    // sat
    auto* sat = app.add_subcommand("sat", "Pseudo-Boolean and CNF models");
    sat->require_subcommand(1);
    ModelOptions mo;
    std::string encoding = "opb", in_model;
    std::uint64_t solve_budget = 10'000'000;
    auto add_model = [&](CLI::App* sub) {
        sub->add_option("--v", mo.v)->required();
        sub->add_option("--r", mo.r)->required();
        sub->add_option("--c", mo.c)->required();
        sub->add_option("--label", mo.label, "Design label")->required();
        sub->add_flag("--improper", mo.improper, "Do not require the omitted properties to fail");
        sub->add_flag("--no-symmetry-breaking", mo.no_symmetry_breaking, "Leave the first column free");
    };
    auto* s_emit = sat->add_subcommand("emit", "Write a model file and its variable map");
    add_model(s_emit);
    s_emit->add_option("--encoding", encoding)->check(CLI::IsMember({"opb", "cnf"}))->capture_default_str();
    add_output(s_emit);
    auto* s_solve = sat->add_subcommand("solve", "Solve a small model with the built-in solver");
    add_model(s_solve);
    s_solve->add_option("--budget", solve_budget, "Decision budget")->capture_default_str();
    auto* s_val = sat->add_subcommand("validate", "Check OPB syntax and header");
    s_val->add_option("--input", in_model)->required()->check(CLI::ExistingFile);

    // youden
    auto* yo = app.add_subcommand("youden", "Youden rectangles");
    yo->require_subcommand(1);
    int max_n = 8, column = 0;
    std::vector<std::string> cov_labels;
    auto* y_enum = yo->add_subcommand("enumerate", "Isotopism classes of (n, k) Youden rectangles");
    auto* y_cov = yo->add_subcommand("coverage", "Classes reachable from Youden rectangles");
    for (auto* sub : {y_enum, y_cov}) {
        sub->add_option("--n", n)->required();
        sub->add_option("--k", k)->required();
        sub->add_option("--max-n", max_n, "Refuse larger n")->capture_default_str();
    }
    add_output(y_enum);
    y_cov->add_option("--label", cov_labels, "Labels (default TA,DA,SAT,MA)")->delimiter(',');
    auto* y_tr = yo->add_subcommand("transform", "Youden rectangle to mono array");
    y_tr->add_option("--input", in_s)->required()->check(CLI::ExistingFile);
    y_tr->add_option("--column", column)->capture_default_str();
    add_output(y_tr);

    // pyd
    auto* py = app.add_subcommand("pyd", "Pseudo Youden designs");
    py->require_subcommand(1);
    int pyd_vmax = 100, series = 1;
    auto* p_check = py->add_subcommand("check", "Is the square array a PYD");
    p_check->add_option("--input", in_s)->required()->check(CLI::ExistingFile);
    auto* p_params = py->add_subcommand("params", "Admissible PYD parameters");
    p_params->add_option("--vmax", pyd_vmax)->capture_default_str();
    auto* p_series = py->add_subcommand("series", "Main-series parameters");
    p_series->add_option("--i", series)->required();

    // report
    auto* rep = app.add_subcommand("report", "Summary table of stored enumeration reports");
    std::vector<std::string> report_inputs;
    int report_vmax = 0;
    rep->add_option("--input", report_inputs, "report.json files")->required()->check(CLI::ExistingFile);
    rep->add_option("--vmax", report_vmax, "Also list every admissible set up to this v")->capture_default_str();

    int status = exit_ok;
    std::string resolved;
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        if (code == 0)
            return 0;
        s.command = "usage-error";
        try {
            write_manifest(s, exit_usage, started, "");
        } catch (const std::exception&) {
        }
        return exit_usage;
    }
    for (auto* sub : app.get_subcommands()) {
        s.command = sub->get_name();
        for (auto* inner : sub->get_subcommands())
            s.command += " " + inner->get_name();
    }
    {
        // Global options and those of the command that ran.
        std::istringstream all(app.config_to_str(true, false));
        std::string prefix = s.command + ".";
        std::replace(prefix.begin(), prefix.end(), ' ', '.');
        for (std::string line; std::getline(all, line);) {
            const std::string key = line.substr(0, line.find('='));
            if (key.find('.') == std::string::npos || key.rfind(prefix, 0) == 0)
                resolved += line + "\n";
        }
    }

    try {
        if (*params)
            status = run_params(s, vmax, pv, pr, pc, small_v, relax, bibd_table);
        else if (*en)
            status = run_enumerate(s, eo);
        else if (*c_sesqui) {
            const rcd::Array a = read_array(s, in_s);
            rcd::Array out;
            if (connected) {
                s.seed = seed;
                auto found = rcd::connected_sesqui_product(a, m, tries, seed);
                if (!found)
                    throw RefusedExit("no connected sesqui product found in " + std::to_string(tries) + " tries");
                out = *found;
            } else {
                out = rcd::sesqui_product(a, m);
            }
            status = emit_array(s, "sesqui", out, output, "sesqui.txt");
        } else if (*c_mono || *c_ao) {
            const rcd::Array a = read_array(s, in_s), b = read_array(s, in_t);
            const bool mono = static_cast<bool>(*c_mono);
            status = emit_array(s, mono ? "mono" : "ao", mono ? rcd::mono_product(a, b) : rcd::ao_product(a, b),
                                output, mono ? "mono.txt" : "ao.txt");
        } else if (*c_aop)
            status = emit_array(s, "ao-params", rcd::ao_for_params(av, ar, ac), output, "ao-params.txt");
        else if (*c_half)
            status = emit_array(s, "half-latin-ao", rcd::half_latin_ao(k), output, "half-latin-ao.txt");
        else if (*c_latin)
            status = emit_array(s, "latin", rcd::latin_rectangle(n, rows, cols), output, "latin.txt");
        else if (*c_cyclic)
            status = emit_array(s, "cyclic", rcd::cyclic_latin_square(n), output, "cyclic.txt");
        else if (*se)
            status = run_search(s, sv, sr, sc, target, seed, restarts, steps, output);
        else if (*s_emit)
            status = run_sat_emit(s, mo, encoding, output);
        else if (*s_solve)
            status = run_sat_solve(s, mo, solve_budget);
        else if (*s_val)
            status = run_sat_validate(s, in_model);
        else if (*y_enum)
            status = run_youden_enumerate(s, n, k, max_n, output);
        else if (*y_cov)
            status = run_youden_coverage(s, n, k, cov_labels, max_n);
        else if (*y_tr) {
            bool tagged = false;
            const rcd::Array y = read_array(s, in_s, &tagged);
            status = emit_array(s, "youden-transform", rcd::youden_to_mono(y, column), output, "mono.txt");
        } else if (*p_check) {
            const rcd::Array a = read_array(s, in_s);
            const bool pyd = rcd::is_pyd(a);
            if (s.as_json())
                s.print_json({{"pyd", pyd}, {"v", a.symbols()}, {"r", a.rows()}, {"c", a.cols()}});
            else
                s.print(pyd ? "PYD\n" : "not a PYD\n");
        } else if (*p_params)
            status = run_pyd_params(s, pyd_vmax);
        else if (*p_series) {
            const rcd::PYDParameterSet p = rcd::pyd_main_series(series);
            if (s.as_json())
                s.print_json({{"v", p.v},
                              {"r", p.r},
                              {"e", p.e},
                              {"lambda_bibd", rcd::rational_json(p.lambda_bibd)},
                              {"series_index", series}});
            else
                s.print("v=" + std::to_string(p.v) + " r=" + std::to_string(p.r) + " e=" + std::to_string(p.e) +
                        " lambda=" + rational_text(p.lambda_bibd) + "\n");
        } else if (*rep)
            status = run_report(s, report_inputs, report_vmax);
    } catch (const UsageError& e) {
        std::cerr << "usage: " << e.what() << "\n";
        status = exit_usage;
    } catch (const RefusedExit& e) {
        std::cerr << "refused: " << e.what() << "\n";
        status = exit_refused;
    } catch (const rcd::Refused& e) {
        std::cerr << "refused: " << e.what() << "\n";
        status = exit_refused;
    } catch (const rcd::ParameterError& e) {
        std::cerr << "invalid parameters: " << e.what() << "\n";
        status = exit_failure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        status = exit_failure;
    }

    std::cout << s.stdout_text << std::flush;
    try {
        write_manifest(s, status, started, resolved);
    } catch (const std::exception& e) {
        std::cerr << "error: manifest: " << e.what() << "\n";
        if (status == exit_ok)
            status = exit_failure;
    }
    return status;
}
