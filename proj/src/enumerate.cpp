#include "rcd/enumerate.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <fstream>
#include <mutex>
#include <set>
#include <thread>

#include "json.hpp"

#include "column_search.hpp"
#include "rcd/canonical.hpp"
#include "rcd/params.hpp"

namespace rcd {

using nlohmann::json;

std::string_view mode_name(SearchMode m) {
    switch (m) {
        case SearchMode::constant_columns: return "constant-columns";
        case SearchMode::constant_rows: return "constant-rows";
        case SearchMode::constant_lines: return "constant-lines";
        case SearchMode::adjusted_orthogonal: return "adjusted-orthogonal";
        case SearchMode::any: return "any";
    }
    return "any";
}

std::optional<SearchMode> parse_mode(std::string_view s) {
    for (auto m : {SearchMode::constant_columns, SearchMode::constant_rows, SearchMode::constant_lines,
                   SearchMode::adjusted_orthogonal, SearchMode::any})
        if (mode_name(m) == s)
            return m;
    return std::nullopt;
}

std::string_view status_name(RunStatus s) {
    switch (s) {
        case RunStatus::complete: return "complete";
        case RunStatus::refused: return "refused";
        case RunStatus::budget_exceeded: return "budget_exceeded";
    }
    return "complete";
}

std::uint64_t EnumerationReport::total() const {
    std::uint64_t t = 0;
    for (const auto& [_, n] : counts)
        t += n;
    return t;
}

std::uint64_t EnumerationReport::count(Label l) const {
    auto it = counts.find(l);
    return it == counts.end() ? 0 : it->second;
}

std::map<Label, std::map<std::uint64_t, std::uint64_t>> autotopism_histogram(const EnumerationReport& report) {
    return report.histogram;
}

bool counts_label(const SearchTarget& t, Label l) {
    const bool rr = l == Label::TA || l == Label::DA || l == Label::SA || l == Label::MAT;
    const bool cc = l == Label::TA || l == Label::DA || l == Label::SAT || l == Label::MA;
    const bool rc = l == Label::TA || l == Label::SA || l == Label::SAT || l == Label::AO;
    if ((t.require_rr && !rr) || (t.require_cc && !cc) || (t.require_rc && !rc))
        return false;
    switch (t.mode) {
        case SearchMode::constant_columns: return cc;
        case SearchMode::constant_rows: return rr;
        case SearchMode::constant_lines: return rr || cc;
        case SearchMode::adjusted_orthogonal: return rc;
        case SearchMode::any: return true;
    }
    return false;
}

std::string inadmissibility_reason(const SearchTarget& t) {
    if (t.v <= 0 || t.r <= 1 || t.c <= 1)
        return "need v > 0, r > 1 and c > 1";
    const ParameterSet p = derive(t.v, t.r, t.c);
    if (std::max(t.r, t.c) > t.v)
        return "a binary array needs r <= v and c <= v";
    if (!p.e_int())
        return "e = rc/v is not an integer, so no equireplicate array exists";
    if (p.infeasible)
        return "2c - v or 2r - v exceeds the average intersection, so no binary array exists";
    const bool need_cc = t.require_cc || t.mode == SearchMode::constant_columns;
    const bool need_rr = t.require_rr || t.mode == SearchMode::constant_rows;
    if (need_cc && !p.lambda_cc_int())
        return "column-column intersection r(e-1)/(c-1) is not an integer";
    if (need_rr && !p.lambda_rr_int())
        return "row-row intersection c(e-1)/(r-1) is not an integer";
    if (t.mode == SearchMode::constant_lines && !p.lambda_cc_int() && !p.lambda_rr_int())
        return "neither average line intersection is an integer";
    return {};
}

namespace {

struct UnitResult {
    bool done = false;
    std::uint64_t nodes = 0, candidates = 0;
    std::map<Label, std::map<std::uint64_t, std::uint64_t>> hist;
    std::vector<Representative> reps[8];
};

// One pass of the engine; `transposed` maps results back to the target shape.
struct Pass {
    detail::EngineConfig cfg;
    bool transposed = false;
    bool exclude_cc = false;  // keep only arrays without constant columns
};

std::string cells_string(const Array& a) {
    std::string s;
    s.reserve(a.cells().size());
    for (Symbol x : a.cells())
        s.push_back(static_cast<char>(x < 10 ? '0' + x : 'a' + (x - 10)));
    return s;
}

std::vector<Symbol> parse_cells(const std::string& s) {
    std::vector<Symbol> out;
    out.reserve(s.size());
    for (char ch : s)
        out.push_back(static_cast<Symbol>(ch <= '9' ? ch - '0' : ch - 'a' + 10));
    return out;
}

json target_json(const SearchTarget& t) {
    return {{"v", t.v}, {"r", t.r}, {"c", t.c}, {"mode", mode_name(t.mode)},
            {"require_rr", t.require_rr}, {"require_cc", t.require_cc}, {"require_rc", t.require_rc}};
}

std::vector<Pass> plan(const SearchTarget& t, const ParameterSet& p) {
    auto base = [&](bool transposed) {
        detail::EngineConfig cfg;
        cfg.v = t.v;
        cfg.r = transposed ? t.c : t.r;
        cfg.c = transposed ? t.r : t.c;
        // Row/column requirements in engine orientation.
        const bool rr = transposed ? t.require_cc : t.require_rr;
        const bool cc = transposed ? t.require_rr : t.require_cc;
        const auto lrr = transposed ? p.lambda_cc_int() : p.lambda_rr_int();
        const auto lcc = transposed ? p.lambda_rr_int() : p.lambda_cc_int();
        if (rr && lrr) {
            cfg.rr_bounded = true;
            cfg.lambda_rr = *lrr;
        }
        if (cc) {
            cfg.cc_exact = true;
            cfg.lambda_cc = lcc;
        }
        if ((t.require_rc || t.mode == SearchMode::adjusted_orthogonal) && p.e_int()) {
            cfg.rc_bounded = true;
            cfg.lambda_rc = *p.e_int();
        }
        return cfg;
    };
    std::vector<Pass> passes;
    auto cc_pass = [&](bool transposed, bool exclude) {
        Pass pass{base(transposed), transposed, exclude};
        pass.cfg.cc_exact = true;
        pass.cfg.lambda_cc = transposed ? p.lambda_rr_int() : p.lambda_cc_int();
        passes.push_back(pass);
    };
    switch (t.mode) {
        case SearchMode::constant_columns: cc_pass(false, false); break;
        case SearchMode::constant_rows: cc_pass(true, false); break;
        case SearchMode::constant_lines:
            if (p.lambda_cc_int() || t.force)
                cc_pass(false, false);
            if (p.lambda_rr_int() || t.force)
                cc_pass(true, p.lambda_cc_int().has_value() || t.force);
            break;
        case SearchMode::adjusted_orthogonal:
        case SearchMode::any: passes.push_back({base(false), false, false}); break;
    }
    return passes;
}

bool meets_target(const SearchTarget& t, const DesignClassification& d) {
    if ((t.require_rr && !d.rr) || (t.require_cc && !d.cc) || (t.require_rc && !d.rc))
        return false;
    switch (t.mode) {
        case SearchMode::constant_columns: return d.cc.has_value();
        case SearchMode::constant_rows: return d.rr.has_value();
        case SearchMode::constant_lines: return d.rr || d.cc;
        case SearchMode::adjusted_orthogonal: return d.rc.has_value();
        case SearchMode::any: return true;
    }
    return false;
}

class Checkpoint {
  public:
    Checkpoint(const std::optional<std::filesystem::path>& path, const json& header) : path_(path) {
        if (!path_)
            return;
        std::ifstream in(*path_);
        std::string line;
        bool first = true, torn = false;
        std::vector<std::string> kept;
        while (in && std::getline(in, line)) {
            if (line.empty())
                continue;
            json j;
            try {
                j = json::parse(line);
            } catch (const json::exception&) {
                torn = true;  // interrupted write; drop it and what follows
                break;
            }
            kept.push_back(line);
            if (first) {
                if (j.value("header", json()) != header)
                    throw Error("checkpoint " + path_->string() + " belongs to a different search");
                first = false;
                continue;
            }
            done_.emplace(j.at("pass").get<int>() * 1'000'000'000LL + j.at("unit").get<long long>(), j);
        }
        in.close();
        if (torn && !first) {
            std::ofstream out(*path_, std::ios::trunc);
            for (const auto& l : kept)
                out << l << '\n';
        }
        if (first) {
            std::ofstream out(*path_, std::ios::trunc);
            out << json{{"header", header}}.dump() << '\n';
            if (!out)
                throw Error("cannot write checkpoint " + path_->string());
        }
    }

    const json* find(int pass, std::size_t unit) const {
        auto it = done_.find(pass * 1'000'000'000LL + static_cast<long long>(unit));
        return it == done_.end() ? nullptr : &it->second;
    }

    void append(const json& j) {
        if (!path_)
            return;
        std::lock_guard lock(mu_);
        std::ofstream out(*path_, std::ios::app);
        out << j.dump() << '\n';
        out.flush();
    }

  private:
    std::optional<std::filesystem::path> path_;
    std::map<long long, json> done_;
    std::mutex mu_;
};

json unit_json(int pass, std::size_t unit, const UnitResult& u) {
    json hist = json::object();
    for (const auto& [l, h] : u.hist) {
        json m = json::object();
        for (const auto& [aut, n] : h)
            m[std::to_string(aut)] = n;
        hist[std::string(label_name(l))] = m;
    }
    json reps = json::array();
    for (int l = 0; l < 8; ++l)
        for (const auto& r : u.reps[l])
            reps.push_back({{"label", label_name(static_cast<Label>(l))}, {"aut", r.aut_order},
                            {"cells", cells_string(r.array)}});
    return {{"pass", pass}, {"unit", unit}, {"nodes", u.nodes}, {"candidates", u.candidates},
            {"hist", hist}, {"reps", reps}};
}

UnitResult unit_from_json(const json& j, const SearchTarget& t) {
    UnitResult u;
    u.done = true;
    u.nodes = j.at("nodes");
    u.candidates = j.at("candidates");
    for (const auto& [name, m] : j.at("hist").items()) {
        const Label l = *parse_label(name);
        for (const auto& [aut, n] : m.items())
            u.hist[l][std::stoull(aut)] = n.get<std::uint64_t>();
    }
    for (const auto& r : j.at("reps")) {
        const Label l = *parse_label(r.at("label").get<std::string>());
        u.reps[static_cast<int>(l)].push_back(
            {Array(t.r, t.c, t.v, parse_cells(r.at("cells").get<std::string>())), r.at("aut").get<std::uint64_t>()});
    }
    return u;
}

}  // namespace

EnumerationReport enumerate(const SearchTarget& target) {
    const auto started = std::chrono::steady_clock::now();
    EnumerationReport rep;
    rep.target = target;
    if (target.v <= 0 || target.r <= 1 || target.c <= 1)
        throw ParameterError("need v > 0, r > 1 and c > 1");
    if (target.v > 64 || target.r > 64 || target.c > 64)
        throw Refused("enumeration supports at most 64 rows, columns and symbols");
    const std::string reason = inadmissibility_reason(target);
    if (!reason.empty() && !target.force) {
        rep.status = RunStatus::refused;
        rep.reason = reason;
        return rep;
    }
    const ParameterSet p = derive(target.v, target.r, target.c);
    if (!p.e_int() || std::max(target.r, target.c) > target.v) {
        rep.reason = "no equireplicate binary array exists";
        return rep;  // complete and empty
    }

    const auto passes = plan(target, p);
    Checkpoint ckpt(target.checkpoint, target_json(target));
    std::atomic<std::uint64_t> total_nodes{0};
    std::atomic<bool> out_of_budget{false};
    auto stop = [&]() {
        if (target.node_budget && total_nodes.fetch_add(1) + 1 > target.node_budget)
            out_of_budget = true;
        return out_of_budget.load();
    };

    for (std::size_t pi = 0; pi < passes.size() && !out_of_budget; ++pi) {
        const Pass& pass = passes[pi];
        const int K = pass.cfg.c;
        const int split = std::min(K - 1, K >= 6 ? 3 : 2);
        std::vector<std::vector<Symbol>> units;
        {
            detail::ColumnEngine eng(pass.cfg);
            eng.should_stop = stop;
            eng.frontier(split, [&](const std::vector<Symbol>& u) { units.push_back(u); });
            rep.stats.nodes += eng.nodes();
            rep.stats.candidates += eng.candidates();
        }
        if (out_of_budget)
            break;
        rep.stats.units += units.size();
        std::vector<UnitResult> results(units.size());
        std::atomic<std::size_t> next{0};
        auto worker = [&]() {
            detail::ColumnEngine eng(pass.cfg);
            eng.should_stop = stop;
            for (;;) {
                const std::size_t ui = next.fetch_add(1);
                if (ui >= units.size() || out_of_budget)
                    return;
                if (const json* j = ckpt.find(static_cast<int>(pi), ui)) {
                    results[ui] = unit_from_json(*j, target);
                    continue;
                }
                UnitResult u;
                const auto n0 = eng.nodes(), c0 = eng.candidates();
                eng.complete(units[ui], [&](const Array& found, std::uint64_t aut) {
                    Array a = found;
                    if (pass.transposed) {
                        auto f = canonical(transpose(found));
                        a = std::move(f.array);
                        aut = f.aut_order;
                    }
                    const DesignClassification d = classify(a);
                    if (pass.exclude_cc && d.cc)
                        return;
                    if (!meets_target(target, d))
                        return;
                    ++u.hist[d.label][aut];
                    if (target.keep_representatives)
                        u.reps[static_cast<int>(d.label)].push_back({std::move(a), aut});
                });
                if (out_of_budget)
                    return;
                u.nodes = eng.nodes() - n0;
                u.candidates = eng.candidates() - c0;
                u.done = true;
                ckpt.append(unit_json(static_cast<int>(pi), ui, u));
                results[ui] = std::move(u);
            }
        };
        const int jobs = std::max(1, target.jobs);
        if (jobs == 1) {
            worker();
        } else {
            std::vector<std::thread> pool;
            for (int t = 0; t < jobs; ++t)
                pool.emplace_back(worker);
            for (auto& th : pool)
                th.join();
        }
        for (auto& u : results) {
            if (!u.done)
                continue;
            rep.stats.nodes += u.nodes;
            rep.stats.candidates += u.candidates;
            for (const auto& [l, h] : u.hist)
                for (const auto& [aut, n] : h) {
                    rep.histogram[l][aut] += n;
                    rep.counts[l] += n;
                }
            for (int l = 0; l < 8; ++l)
                for (auto& r : u.reps[l])
                    rep.representatives[static_cast<Label>(l)].push_back(std::move(r));
        }
    }
    for (auto& [_, v] : rep.representatives)
        std::sort(v.begin(), v.end(), [](const Representative& a, const Representative& b) { return a.array < b.array; });
    if (out_of_budget) {
        rep.status = RunStatus::budget_exceeded;
        rep.reason = "node budget of " + std::to_string(target.node_budget) + " exhausted";
    }
    rep.stats.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return rep;
}

}  // namespace rcd
