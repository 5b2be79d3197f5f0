#include "rcd/satgen.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "json.hpp"
#include "pb_internal.hpp"
#include "rcd/params.hpp"

namespace rcd {

namespace {

struct Families {
    bool rr = false, cc = false, rc = false;
};

Families required(Label l) {
    switch (l) {
        case Label::TA: return {true, true, true};
        case Label::DA: return {true, true, false};
        case Label::SA: return {true, false, true};
        case Label::SAT: return {false, true, true};
        case Label::MA: return {false, true, false};
        case Label::MAT: return {true, false, false};
        case Label::AO: return {false, false, true};
        case Label::none: return {};
    }
    return {};
}

class Builder {
  public:
    explicit Builder(PBModel& m) : m_(m) { m_.num_vars = m.r * m.c * m.v; }

    int block(const std::string& name, const std::string& meaning, int count) {
        const int first = m_.num_vars + 1;
        m_.num_vars += count;
        m_.blocks.push_back({name, meaning, first, count});
        return first;
    }

    void add(std::vector<std::pair<int, int>> terms, PBConstraint::Rel rel, long long rhs) {
        m_.constraints.push_back({std::move(terms), rel, rhs});
    }

  private:
    PBModel& m_;
};

}  // namespace

PBModel build_model(int v, int r, int c, Label label, bool proper, bool symmetry_breaking) {
    if (label == Label::none)
        throw ParameterError("a model needs a design type");
    if (r < 2 || c < 2 || v < 1 || r > v || c > v)
        throw ParameterError("need 2 <= r, c <= v");
    const ParameterSet p = derive(v, r, c);
    if (!p.e_int())
        throw Refused("e = rc/v is not an integer");
    const Families req = required(label);
    if (req.rr && !p.lambda_rr_int())
        throw Refused("row-row intersection c(e-1)/(r-1) is not an integer");
    if (req.cc && !p.lambda_cc_int())
        throw Refused("column-column intersection r(e-1)/(c-1) is not an integer");
    PBModel m;
    m.v = v;
    m.r = r;
    m.c = c;
    m.label = label;
    m.proper = proper;
    m.symmetry_breaking = symmetry_breaking;
    Builder b(m);
    m.blocks.push_back({"x", "1 + (i*c + j)*v + s: cell (i, j) holds s", 1, r * c * v});
    using Rel = PBConstraint::Rel;
    const int e = *p.e_int();

    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j) {
            std::vector<std::pair<int, int>> t;
            for (int s = 0; s < v; ++s)
                t.push_back({1, m.x(i, j, s)});
            b.add(t, Rel::eq, 1);
        }
    for (int s = 0; s < v; ++s) {
        for (int i = 0; i < r; ++i) {
            std::vector<std::pair<int, int>> t;
            for (int j = 0; j < c; ++j)
                t.push_back({-1, m.x(i, j, s)});
            b.add(t, Rel::ge, -1);
        }
        for (int j = 0; j < c; ++j) {
            std::vector<std::pair<int, int>> t;
            for (int i = 0; i < r; ++i)
                t.push_back({-1, m.x(i, j, s)});
            b.add(t, Rel::ge, -1);
        }
        std::vector<std::pair<int, int>> t;
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < c; ++j)
                t.push_back({1, m.x(i, j, s)});
        b.add(t, Rel::eq, e);
    }
    if (symmetry_breaking)
        for (int i = 0; i < r; ++i)
            b.add({{1, m.x(i, 0, i)}}, Rel::ge, 1);

    // Line membership "line holds s" as linear sums of x.
    auto row_sum = [&](int i, int s) {
        std::vector<std::pair<int, int>> t;
        for (int j = 0; j < c; ++j)
            t.push_back({1, m.x(i, j, s)});
        return t;
    };
    auto col_sum = [&](int j, int s) {
        std::vector<std::pair<int, int>> t;
        for (int i = 0; i < r; ++i)
            t.push_back({1, m.x(i, j, s)});
        return t;
    };
    // y <-> (sum A) and (sum B), both sums 0/1.
    auto link = [&](int y, const std::vector<std::pair<int, int>>& a, const std::vector<std::pair<int, int>>& bb) {
        for (const auto* side : {&a, &bb}) {
            auto t = *side;
            t.push_back({-1, y});
            b.add(t, Rel::ge, 0);
        }
        std::vector<std::pair<int, int>> t{{1, y}};
        for (auto [k, x] : a)
            t.push_back({-k, x});
        for (auto [k, x] : bb)
            t.push_back({-k, x});
        b.add(t, Rel::ge, -1);
    };
    // A family of line pairs: sizes are sums of y over symbols.
    struct Family {
        std::string name;
        int pairs;
        std::function<std::vector<std::pair<int, int>>(int, int)> first, second;  // (pair, s)
        std::optional<int> lambda;
        bool required;
    };
    std::vector<std::pair<int, int>> row_pairs, col_pairs, rc_pairs;
    for (int i = 0; i < r; ++i)
        for (int i2 = i + 1; i2 < r; ++i2)
            row_pairs.push_back({i, i2});
    for (int j = 0; j < c; ++j)
        for (int j2 = j + 1; j2 < c; ++j2)
            col_pairs.push_back({j, j2});
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j)
            rc_pairs.push_back({i, j});
    std::vector<Family> fams;
    fams.push_back({"rr", static_cast<int>(row_pairs.size()),
                    [&](int q, int s) { return row_sum(row_pairs[q].first, s); },
                    [&](int q, int s) { return row_sum(row_pairs[q].second, s); }, p.lambda_rr_int(), req.rr});
    fams.push_back({"cc", static_cast<int>(col_pairs.size()),
                    [&](int q, int s) { return col_sum(col_pairs[q].first, s); },
                    [&](int q, int s) { return col_sum(col_pairs[q].second, s); }, p.lambda_cc_int(), req.cc});
    fams.push_back({"rc", static_cast<int>(rc_pairs.size()),
                    [&](int q, int s) { return row_sum(rc_pairs[q].first, s); },
                    [&](int q, int s) { return col_sum(rc_pairs[q].second, s); }, e, req.rc});
    const char* pair_meaning[] = {"pair index over (i < i2) in lexicographic order", "pair index over (j < j2) in lexicographic order",
                                  "pair index i*c + j"};
    for (std::size_t f = 0; f < fams.size(); ++f) {
        const Family& fam = fams[f];
        const bool deviate = proper && !fam.required && fam.lambda.has_value();
        if (!fam.required && !deviate)
            continue;
        const int y0 = b.block("y_" + fam.name, std::string("first + pair*v + s: symbol s in both lines; ") + pair_meaning[f],
                               fam.pairs * v);
        for (int q = 0; q < fam.pairs; ++q)
            for (int s = 0; s < v; ++s)
                link(y0 + q * v + s, fam.first(q, s), fam.second(q, s));
        auto size_terms = [&](int q) {
            std::vector<std::pair<int, int>> t;
            for (int s = 0; s < v; ++s)
                t.push_back({1, y0 + q * v + s});
            return t;
        };
        if (fam.required) {
            for (int q = 0; q < fam.pairs; ++q)
                b.add(size_terms(q), Rel::eq, *fam.lambda);
            continue;
        }
        // lt -> size <= lambda - 1, gt -> size >= lambda + 1, some pair deviates.
        const int lam = *fam.lambda;
        const int big = v + 1;
        const int lt0 = b.block("lt_" + fam.name, "first + pair: this pair is below the average", fam.pairs);
        const int gt0 = b.block("gt_" + fam.name, "first + pair: this pair is above the average", fam.pairs);
        std::vector<std::pair<int, int>> any;
        for (int q = 0; q < fam.pairs; ++q) {
            auto t = size_terms(q);
            for (auto& term : t)
                term.first = -1;
            t.push_back({-big, lt0 + q});
            b.add(t, Rel::ge, 1 - lam - big);
            auto u = size_terms(q);
            u.push_back({-(lam + 1), gt0 + q});
            b.add(u, Rel::ge, 0);
            any.push_back({1, lt0 + q});
            any.push_back({1, gt0 + q});
        }
        b.add(any, Rel::ge, 1);
    }
    return m;
}

std::string to_opb(const PBModel& m) {
    std::ostringstream out;
    out << "* #variable= " << m.num_vars << " #constraint= " << m.constraints.size() << "\n";
    out << "* row-column design model v=" << m.v << " r=" << m.r << " c=" << m.c << " label=" << label_name(m.label)
        << " proper=" << (m.proper ? 1 : 0) << " symmetry_breaking=" << (m.symmetry_breaking ? 1 : 0) << "\n";
    for (const auto& k : m.constraints) {
        for (auto [coef, var] : k.terms)
            out << (coef >= 0 ? "+" : "") << coef << " x" << var << " ";
        out << (k.rel == PBConstraint::Rel::eq ? "= " : ">= ") << k.rhs << " ;\n";
    }
    return out.str();
}

namespace {

class CnfBuilder {
  public:
    explicit CnfBuilder(int vars) { f_.num_vars = vars; }

    int fresh() { return ++f_.num_vars; }
    void clause(std::vector<int> c) { f_.clauses.push_back(std::move(c)); }

    // sum of weighted literals >= bound, weights positive.
    void at_least(const std::vector<detail::WeightedLit>& lits, long long bound) {
        if (bound <= 0)
            return;
        long long total = 0;
        for (const auto& l : lits)
            total += l.weight;
        if (total < bound) {
            clause({});
            return;
        }
        const bool unit_weights = std::all_of(lits.begin(), lits.end(), [](const auto& l) { return l.weight == 1; });
        if (bound == 1 && unit_weights) {
            std::vector<int> c;
            for (const auto& l : lits)
                c.push_back(l.lit);
            clause(c);
            return;
        }
        std::vector<int> inputs;
        for (const auto& l : lits)
            for (long long k = 0; k < std::min<long long>(l.weight, bound); ++k)
                inputs.push_back(l.lit);
        const int cap = static_cast<int>(bound);
        const auto out = totalizer(inputs, 0, inputs.size(), cap);
        clause({out[cap - 1]});
    }

    CNFFormula take() { return std::move(f_); }

  private:
    // Outputs o[k-1] <-> at least k of the inputs, for k <= cap.
    std::vector<int> totalizer(const std::vector<int>& in, std::size_t lo, std::size_t hi, int cap) {
        if (hi - lo == 1)
            return {in[lo]};
        const std::size_t mid = lo + (hi - lo) / 2;
        const auto a = totalizer(in, lo, mid, cap);
        const auto b = totalizer(in, mid, hi, cap);
        const int p = static_cast<int>(a.size()), q = static_cast<int>(b.size());
        const int n = std::min(cap, p + q);
        std::vector<int> o(n);
        for (int k = 0; k < n; ++k)
            o[k] = fresh();
        // Upward: a_i and b_j give at least i + j.
        for (int i = 0; i <= p; ++i)
            for (int j = 0; j <= q; ++j) {
                if (i + j == 0)
                    continue;
                const int k = std::min(i + j, n);
                std::vector<int> c;
                if (i > 0)
                    c.push_back(-a[i - 1]);
                if (j > 0)
                    c.push_back(-b[j - 1]);
                c.push_back(o[k - 1]);
                clause(c);
            }
        // Downward: fewer than i + 1 and fewer than j + 1 give fewer than i + j + 1.
        for (int i = 0; i <= p; ++i)
            for (int j = 0; j <= q; ++j) {
                if (i + j + 1 > n)
                    continue;
                std::vector<int> c;
                if (i < p)
                    c.push_back(a[i]);
                if (j < q)
                    c.push_back(b[j]);
                c.push_back(-o[i + j]);
                clause(c);
            }
        return o;
    }

    CNFFormula f_;
};

}  // namespace

CNFFormula to_cnf_formula(const PBModel& m) {
    CnfBuilder cb(m.num_vars);
    for (const auto& k : m.constraints)
        for (const auto& norm : detail::normalize(k))
            cb.at_least(norm.lits, norm.bound);
    return cb.take();
}

std::string to_dimacs(const CNFFormula& f, const PBModel& m) {
    std::ostringstream out;
    out << "c row-column design model v=" << m.v << " r=" << m.r << " c=" << m.c << " label=" << label_name(m.label)
        << " proper=" << (m.proper ? 1 : 0) << " symmetry_breaking=" << (m.symmetry_breaking ? 1 : 0) << "\n";
    out << "c variables 1.." << m.num_vars << " as in the model; the rest are totalizer outputs\n";
    out << "p cnf " << f.num_vars << " " << f.clauses.size() << "\n";
    for (const auto& c : f.clauses) {
        for (int l : c)
            out << l << " ";
        out << "0\n";
    }
    return out.str();
}

std::string sidecar_json(const PBModel& m, const std::string& format, int total_vars) {
    nlohmann::ordered_json j;
    j["format"] = format;
    j["v"] = m.v;
    j["r"] = m.r;
    j["c"] = m.c;
    j["label"] = label_name(m.label);
    j["proper"] = m.proper;
    j["symmetry_breaking"] = m.symmetry_breaking;
    j["model_variables"] = m.num_vars;
    j["total_variables"] = total_vars;
    j["constraints"] = m.constraints.size();
    auto blocks = nlohmann::ordered_json::array();
    for (const auto& b : m.blocks)
        blocks.push_back({{"name", b.name}, {"first", b.first}, {"count", b.count}, {"meaning", b.meaning}});
    j["blocks"] = blocks;
    return j.dump(2) + "\n";
}

OPBCheck validate_opb(const std::string& text) {
    OPBCheck res;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    int declared_vars = -1, declared_cons = -1, seen = 0, max_var = 0;
    auto fail = [&](const std::string& msg) {
        res.ok = false;
        res.message = "line " + std::to_string(line_no) + ": " + msg;
        return res;
    };
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty())
            continue;
        if (line[0] == '*') {
            if (line_no == 1) {
                std::istringstream h(line.substr(1));
                std::string a, b;
                if (!(h >> a >> declared_vars >> b >> declared_cons) || a != "#variable=" || b != "#constraint=")
                    return fail("header must read '* #variable= N #constraint= M'");
            }
            continue;
        }
        if (line_no == 1)
            return fail("missing header comment");
        std::istringstream ss(line);
        std::string tok;
        bool rel = false, done = false;
        int terms = 0;
        while (ss >> tok) {
            if (done)
                return fail("text after ';'");
            if (rel) {
                std::size_t pos = 0;
                try {
                    std::stoll(tok, &pos);
                } catch (...) {
                    return fail("bad right-hand side '" + tok + "'");
                }
                if (pos != tok.size())
                    return fail("bad right-hand side '" + tok + "'");
                if (!(ss >> tok) || tok != ";")
                    return fail("constraint must end with ';'");
                done = true;
                continue;
            }
            if (tok == ">=" || tok == "=") {
                if (terms == 0)
                    return fail("empty left-hand side");
                rel = true;
                continue;
            }
            if (tok.size() < 2 || (tok[0] != '+' && tok[0] != '-'))
                return fail("coefficient must carry a sign: '" + tok + "'");
            std::size_t pos = 0;
            try {
                std::stoll(tok, &pos);
            } catch (...) {
                return fail("bad coefficient '" + tok + "'");
            }
            if (pos != tok.size())
                return fail("bad coefficient '" + tok + "'");
            std::string var;
            if (!(ss >> var) || var.size() < 2 || var[0] != 'x')
                return fail("expected a variable after the coefficient");
            int idx = 0;
            try {
                idx = std::stoi(var.substr(1), &pos);
            } catch (...) {
                return fail("bad variable '" + var + "'");
            }
            if (pos != var.size() - 1 || idx < 1)
                return fail("bad variable '" + var + "'");
            max_var = std::max(max_var, idx);
            ++terms;
        }
        if (!done)
            return fail("incomplete constraint");
        ++seen;
    }
    if (declared_vars < 0)
        return fail("missing header");
    if (seen != declared_cons)
        return fail("header declares " + std::to_string(declared_cons) + " constraints, found " + std::to_string(seen));
    if (max_var > declared_vars)
        return fail("variable x" + std::to_string(max_var) + " exceeds the declared count");
    res.ok = true;
    res.variables = declared_vars;
    res.constraints = seen;
    return res;
}

bool satisfies(const PBModel& m, const std::vector<bool>& a) {
    if (static_cast<int>(a.size()) != m.num_vars + 1)
        return false;
    for (const auto& k : m.constraints) {
        long long sum = 0;
        for (auto [coef, var] : k.terms)
            sum += a[var] ? coef : 0;
        if (k.rel == PBConstraint::Rel::eq ? sum != k.rhs : sum < k.rhs)
            return false;
    }
    return true;
}

std::optional<std::vector<bool>> encode(const PBModel& m, const Array& arr) {
    if (arr.rows() != m.r || arr.cols() != m.c || arr.symbols() != m.v)
        return std::nullopt;
    std::vector<bool> a(m.num_vars + 1, false);
    for (int i = 0; i < m.r; ++i)
        for (int j = 0; j < m.c; ++j)
            a[m.x(i, j, arr.at(i, j))] = true;
    auto in_row = [&](int i, int s) {
        for (int j = 0; j < m.c; ++j)
            if (arr.at(i, j) == s)
                return true;
        return false;
    };
    auto in_col = [&](int j, int s) {
        for (int i = 0; i < m.r; ++i)
            if (arr.at(i, j) == s)
                return true;
        return false;
    };
    std::vector<std::pair<int, int>> row_pairs, col_pairs;
    for (int i = 0; i < m.r; ++i)
        for (int i2 = i + 1; i2 < m.r; ++i2)
            row_pairs.push_back({i, i2});
    for (int j = 0; j < m.c; ++j)
        for (int j2 = j + 1; j2 < m.c; ++j2)
            col_pairs.push_back({j, j2});
    const ParameterSet p = derive(m.v, m.r, m.c);
    for (const auto& b : m.blocks) {
        const std::string fam = b.name.size() > 2 ? b.name.substr(b.name.find('_') + 1) : "";
        auto both = [&](int q, int s) {
            if (fam == "rr")
                return in_row(row_pairs[q].first, s) && in_row(row_pairs[q].second, s);
            if (fam == "cc")
                return in_col(col_pairs[q].first, s) && in_col(col_pairs[q].second, s);
            return in_row(q / m.c, s) && in_col(q % m.c, s);
        };
        auto size = [&](int q) {
            int n = 0;
            for (int s = 0; s < m.v; ++s)
                n += both(q, s);
            return n;
        };
        const int lam = fam == "rr" ? p.lambda_rr_int().value_or(0) : fam == "cc" ? p.lambda_cc_int().value_or(0) : p.e_int().value_or(0);
        if (b.name.rfind("y_", 0) == 0) {
            for (int q = 0; q < b.count / m.v; ++q)
                for (int s = 0; s < m.v; ++s)
                    a[b.first + q * m.v + s] = both(q, s);
        } else if (b.name.rfind("lt_", 0) == 0) {
            for (int q = 0; q < b.count; ++q)
                a[b.first + q] = size(q) < lam;
        } else if (b.name.rfind("gt_", 0) == 0) {
            for (int q = 0; q < b.count; ++q)
                a[b.first + q] = size(q) > lam;
        }
    }
    if (!satisfies(m, a))
        return std::nullopt;
    return a;
}

Array decode(const PBModel& m, const std::vector<bool>& a) {
    Array out(m.r, m.c, m.v);
    for (int i = 0; i < m.r; ++i)
        for (int j = 0; j < m.c; ++j) {
            int found = -1;
            for (int s = 0; s < m.v; ++s)
                if (a[m.x(i, j, s)]) {
                    if (found >= 0)
                        throw StructuralError("cell holds two symbols");
                    found = s;
                }
            if (found < 0)
                throw StructuralError("cell holds no symbol");
            out.set(i, j, static_cast<Symbol>(found));
        }
    return out;
}

}  // namespace rcd
