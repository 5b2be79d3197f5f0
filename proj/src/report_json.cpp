#include "rcd/report_json.hpp"

#include <string>

namespace rcd {

using nlohmann::json;

json rational_json(const Rational& q) { return {{"num", q.numerator()}, {"den", q.denominator()}}; }

json array_json(const Array& a) {
    json rows = json::array();
    for (int i = 0; i < a.rows(); ++i) {
        json row = json::array();
        for (int j = 0; j < a.cols(); ++j)
            row.push_back(static_cast<int>(a.at(i, j)));
        rows.push_back(std::move(row));
    }
    return {{"v", a.symbols()}, {"r", a.rows()}, {"c", a.cols()}, {"rows", std::move(rows)}};
}

Array array_from_json(const json& j) {
    std::vector<std::vector<int>> rows = j.at("rows").get<std::vector<std::vector<int>>>();
    Array a = Array::from_rows(j.at("v").get<int>(), rows);
    if (a.rows() != j.at("r").get<int>() || a.cols() != j.at("c").get<int>())
        throw StructuralError("array JSON: shape does not match r and c");
    return a;
}

json params_json(const ParameterSet& p) {
    json admits = json::object();
    for (Label l : all_labels)
        admits[std::string(label_name(l))] = !p.divisibility_admits(l) ? "inadmissible" : p.dashed(l) ? "dashed" : "admissible";
    return {{"v", p.v},
            {"r", p.r},
            {"c", p.c},
            {"e", rational_json(p.e)},
            {"lambda_rr", rational_json(p.lambda_rr)},
            {"lambda_cc", rational_json(p.lambda_cc)},
            {"lambda_rc", rational_json(p.lambda_rc)},
            {"in_range", p.in_range},
            {"admissible_for", std::string(admissible_name(p.admissible_for))},
            {"forced_rr", p.forced_rr},
            {"forced_cc", p.forced_cc},
            {"infeasible", p.infeasible},
            {"labels", std::move(admits)}};
}

namespace {

json optional_int(const std::optional<int>& x) { return x ? json(*x) : json(nullptr); }

}  // namespace

json classification_json(const DesignClassification& d) {
    return {{"label", std::string(label_name(d.label))},
            {"rr", optional_int(d.rr)},
            {"cc", optional_int(d.cc)},
            {"rc", optional_int(d.rc)},
            {"connected_rows", d.connected_rows},
            {"connected_cols", d.connected_cols}};
}

json report_json(const EnumerationReport& r, bool with_timing) {
    const SearchTarget& t = r.target;
    json counts = json::object();
    json hist = json::object();
    auto put = [&](Label l) {
        const std::string name(label_name(l));
        counts[name] = r.count(l);
        json h = json::object();
        if (auto it = r.histogram.find(l); it != r.histogram.end())
            for (const auto& [order, n] : it->second)
                h[std::to_string(order)] = n;
        hist[name] = std::move(h);
    };
    for (Label l : all_labels)
        put(l);
    put(Label::none);
    json stats = {{"nodes", r.stats.nodes}, {"candidates", r.stats.candidates}, {"units", r.stats.units}};
    if (with_timing)
        stats["wall_seconds"] = r.stats.wall_seconds;
    return {{"target",
             {{"v", t.v},
              {"r", t.r},
              {"c", t.c},
              {"mode", std::string(mode_name(t.mode))},
              {"require_rr", t.require_rr},
              {"require_cc", t.require_cc},
              {"require_rc", t.require_rc},
              {"node_budget", t.node_budget},
              {"force", t.force}}},
            {"status", std::string(status_name(r.status))},
            {"reason", r.reason},
            {"total", r.total()},
            {"counts", std::move(counts)},
            {"histogram", std::move(hist)},
            {"stats", std::move(stats)}};
}

EnumerationReport report_from_json(const json& j) {
    EnumerationReport r;
    const json& t = j.at("target");
    r.target.v = t.at("v").get<int>();
    r.target.r = t.at("r").get<int>();
    r.target.c = t.at("c").get<int>();
    auto mode = parse_mode(t.at("mode").get<std::string>());
    if (!mode)
        throw StructuralError("report JSON: unknown mode");
    r.target.mode = *mode;
    r.target.require_rr = t.value("require_rr", false);
    r.target.require_cc = t.value("require_cc", false);
    r.target.require_rc = t.value("require_rc", false);
    r.target.node_budget = t.value("node_budget", std::uint64_t{0});
    r.target.force = t.value("force", false);
    const std::string status = j.at("status").get<std::string>();
    for (auto s : {RunStatus::complete, RunStatus::refused, RunStatus::budget_exceeded})
        if (status_name(s) == status)
            r.status = s;
    r.reason = j.value("reason", std::string());
    for (const auto& [name, n] : j.at("counts").items()) {
        auto l = parse_label(name);
        if (!l)
            throw StructuralError("report JSON: unknown label " + name);
        if (n.get<std::uint64_t>() > 0)
            r.counts[*l] = n.get<std::uint64_t>();
    }
    if (j.contains("histogram"))
        for (const auto& [name, h] : j.at("histogram").items()) {
            auto l = parse_label(name);
            if (!l)
                throw StructuralError("report JSON: unknown label " + name);
            for (const auto& [order, n] : h.items())
                r.histogram[*l][std::stoull(order)] = n.get<std::uint64_t>();
        }
    if (j.contains("stats")) {
        const json& s = j.at("stats");
        r.stats.nodes = s.value("nodes", std::uint64_t{0});
        r.stats.candidates = s.value("candidates", std::uint64_t{0});
        r.stats.units = s.value("units", std::uint64_t{0});
        r.stats.wall_seconds = s.value("wall_seconds", 0.0);
    }
    return r;
}

}  // namespace rcd
