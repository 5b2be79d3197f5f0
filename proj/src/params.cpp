#include "rcd/params.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

namespace rcd {

namespace {

std::optional<int> as_int(const Rational& q) {
    if (q.denominator() != 1)
        return std::nullopt;
    return static_cast<int>(q.numerator());
}

}  // namespace

std::string_view admissible_name(Admissible a) {
    switch (a) {
        case Admissible::none: return "none";
        case Admissible::ao_only: return "AO";
        case Admissible::cc_side: return "AO+MA+SAT";
        case Admissible::rr_side: return "AO+MAT+SA";
        case Admissible::all: return "all";
    }
    return "none";
}

std::optional<int> ParameterSet::e_int() const { return as_int(e); }
std::optional<int> ParameterSet::lambda_rr_int() const { return as_int(lambda_rr); }
std::optional<int> ParameterSet::lambda_cc_int() const { return as_int(lambda_cc); }

bool ParameterSet::divisibility_admits(Label l) const {
    const bool rr = admissible_for == Admissible::rr_side || admissible_for == Admissible::all;
    const bool cc = admissible_for == Admissible::cc_side || admissible_for == Admissible::all;
    switch (l) {
        case Label::AO: return admissible_for != Admissible::none;
        case Label::MA:
        case Label::SAT: return cc;
        case Label::MAT:
        case Label::SA: return rr;
        case Label::TA:
        case Label::DA: return admissible_for == Admissible::all;
        case Label::none: return false;
    }
    return false;
}

bool ParameterSet::dashed(Label l) const {
    switch (l) {
        case Label::MA:
        case Label::SAT: return forced_rr;
        case Label::MAT:
        case Label::SA: return forced_cc;
        case Label::AO: return forced_rr || forced_cc;
        default: return false;
    }
}

ParameterSet derive(int v, int r, int c) {
    if (r <= 1 || c <= 1)
        throw ParameterError("derive needs r > 1 and c > 1");
    if (v <= 0)
        throw ParameterError("derive needs v > 0");
    ParameterSet p;
    p.v = v;
    p.r = r;
    p.c = c;
    p.e = Rational(static_cast<std::int64_t>(r) * c, v);
    p.lambda_rr = Rational(c) * (p.e - 1) / Rational(r - 1);
    p.lambda_cc = Rational(r) * (p.e - 1) / Rational(c - 1);
    p.lambda_rc = p.e;
    p.in_range = std::max(r, c) < v && 2 * v <= r * c;
    p.forced_rr = Rational(2 * c - v) == p.lambda_rr;
    p.forced_cc = Rational(2 * r - v) == p.lambda_cc;
    p.infeasible = Rational(2 * c - v) > p.lambda_rr || Rational(2 * r - v) > p.lambda_cc;
    if (p.e.denominator() == 1 && !p.infeasible) {
        const bool rr = p.lambda_rr.denominator() == 1;
        const bool cc = p.lambda_cc.denominator() == 1;
        p.admissible_for = rr && cc ? Admissible::all
                           : cc     ? Admissible::cc_side
                           : rr     ? Admissible::rr_side
                                    : Admissible::ao_only;
    }
    return p;
}

std::vector<ParameterSet> enumerate_admissible(int v_max) {
    std::vector<ParameterSet> out;
    for (int v = 2; v <= v_max; ++v) {
        std::vector<ParameterSet> block;
        for (int r = 2; r < v; ++r)
            for (int c = r; c < v; ++c) {
                if ((r * c) % v != 0 || 2 * v > r * c)
                    continue;
                ParameterSet p = derive(v, r, c);
                if (p.admissible_for == Admissible::none)
                    continue;
                block.push_back(p);
                if (r != c)
                    block.push_back(derive(v, c, r));
            }
        std::stable_sort(block.begin(), block.end(), [](const ParameterSet& a, const ParameterSet& b) {
            const int ea = static_cast<int>(a.e.numerator()), eb = static_cast<int>(b.e.numerator());
            if (ea != eb)
                return ea < eb;
            return std::min(a.r, a.c) < std::min(b.r, b.c);
        });
        out.insert(out.end(), block.begin(), block.end());
    }
    return out;
}

std::string_view existence_name(Existence e) {
    switch (e) {
        case Existence::exists: return "exists";
        case Existence::known_nonexistent: return "known-nonexistent";
        case Existence::unknown: return "unknown";
    }
    return "unknown";
}

BIBDTable::BIBDTable() {
    // (points, block size, lambda)
    for (auto [p, k, l] : {std::tuple{15, 5, 2}, {15, 10, 9}, {21, 6, 2}, {21, 15, 14}})
        add(p, k, l, Existence::known_nonexistent);
    // Projective and affine planes, Hadamard designs and complements.
    for (auto [p, k, l] : {std::tuple{7, 3, 1}, {7, 4, 2}, {13, 4, 1}, {13, 9, 6}, {21, 5, 1}, {21, 16, 12},
                           {31, 6, 1}, {31, 25, 20}, {9, 3, 1}, {9, 6, 5}, {16, 4, 1}, {16, 12, 11},
                           {25, 5, 1}, {11, 5, 2}, {11, 6, 3}, {15, 7, 3}, {15, 8, 4}, {16, 6, 2},
                           {16, 10, 6}, {8, 4, 3}})
        add(p, k, l, Existence::exists);
}

void BIBDTable::add(int points, int block_size, int lambda, Existence status) {
    for (auto& e : entries_)
        if (e.points == points && e.block_size == block_size && e.lambda == lambda) {
            e.status = status;
            return;
        }
    entries_.push_back({points, block_size, lambda, status});
}

void BIBDTable::load(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in)
        throw Error("cannot open BIBD table " + file.string());
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.resize(hash);
        std::istringstream ss(line);
        std::string status;
        int p, k, l;
        if (!(ss >> status))
            continue;
        if (!(ss >> p >> k >> l))
            throw StructuralError(file.string() + ":" + std::to_string(line_no) + ": expected 'status points k lambda'");
        if (status == "exists")
            add(p, k, l, Existence::exists);
        else if (status == "nonexistent")
            add(p, k, l, Existence::known_nonexistent);
        else
            throw StructuralError(file.string() + ":" + std::to_string(line_no) + ": unknown status '" + status + "'");
    }
}

Existence BIBDTable::lookup(const BIBDParams& p) const {
    // A multiple of a listed design with the same block size also exists.
    for (const auto& e : entries_) {
        if (e.points != p.points || e.block_size != p.block_size)
            continue;
        if (e.lambda == p.pair_count)
            return e.status;
        if (e.status == Existence::exists && p.pair_count % e.lambda == 0)
            return Existence::exists;
    }
    // Complete design: every k-subset; its multiples exist too.
    const int n = p.points, k = p.block_size;
    if (k >= 1 && k <= n) {
        double all = 1;  // C(n, k) as double; only compared when small
        for (int i = 0; i < k; ++i)
            all = all * (n - i) / (i + 1);
        if (all <= 1e9) {
            const long long subsets = std::llround(all);
            if (p.blocks % subsets == 0)
                return Existence::exists;
        }
    }
    return Existence::unknown;
}

ComponentBIBDs component_bibds(const ParameterSet& p, const BIBDTable& table) {
    ComponentBIBDs out;
    const auto e = p.e_int();
    if (!e)
        return out;
    if (auto l = p.lambda_rr_int()) {
        out.row = BIBDParams{p.r, p.v, p.c, *e, *l};
        out.row_hint = table.lookup(*out.row);
    }
    if (auto l = p.lambda_cc_int()) {
        out.col = BIBDParams{p.c, p.v, p.r, *e, *l};
        out.col_hint = table.lookup(*out.col);
    }
    return out;
}

std::vector<ParameterSet> search_small_v(int v_max, SmallVRelaxation relax) {
    std::vector<ParameterSet> out;
    auto out_of = [&](const ParameterSet& p) {
        bool hit = false;
        switch (relax) {
            case SmallVRelaxation::double_triple: hit = p.admits(Label::DA); break;
            case SmallVRelaxation::cc_side: hit = p.admits(Label::MA) || p.admits(Label::SAT); break;
            case SmallVRelaxation::rr_side: hit = p.admits(Label::MAT) || p.admits(Label::SA); break;
            case SmallVRelaxation::ao: hit = p.admits(Label::AO); break;
        }
        if (hit)
            out.push_back(p);
    };
    for (int v = 2; v <= v_max; ++v) {
        for (int r = 2; r < v; ++r) {
            // e integral needs c to be a multiple of v / gcd(v, r).
            const int step = v / std::gcd(v, r);
            // v < r + c - 1 and r <= c < v.
            int c = std::max(r, v - r + 2);
            c = (c + step - 1) / step * step;
            for (; c < v; c += step) {
                if (2 * v > r * c)
                    continue;
                out_of(derive(v, r, c));
                if (r != c)
                    out_of(derive(v, c, r));
            }
        }
    }
    return out;
}

PYDParameterSet pyd_main_series(int i) {
    if (i < 2)
        throw ParameterError("the main series starts at i = 2");
    const std::int64_t s = 2 * i - 1;
    const std::int64_t sign = (i - 1) % 2 == 0 ? 1 : -1;
    const std::int64_t t = s * (s - sign) / 2;
    PYDParameterSet p;
    p.v = static_cast<int>(s * s);
    p.r = static_cast<int>(t);
    if ((t * t) % (s * s) != 0)
        throw Error("main series element is not integral");
    p.e = static_cast<int>(t * t / (s * s));
    p.lambda_bibd = Rational(2 * p.e * (t - 1), s * s - 1);
    p.series_index = i;
    return p;
}

std::vector<PYDParameterSet> pyd_admissible_search(int v_max) {
    std::vector<PYDParameterSet> out;
    for (std::int64_t v = 2; v <= v_max; ++v) {
        // Smallest w with v | w^2: product of p^ceil(a/2).
        std::int64_t w = 1, n = v;
        for (std::int64_t p = 2; p * p <= n; ++p) {
            int a = 0;
            while (n % p == 0) {
                n /= p;
                ++a;
            }
            for (int k = 0; k < (a + 1) / 2; ++k)
                w *= p;
        }
        if (n > 1)
            w *= n;
        for (std::int64_t r = w; r < v; r += w) {
            if (r * r <= v)
                continue;
            const std::int64_t e = r * r / v;
            if ((2 * e * (r - 1)) % (v - 1) != 0)
                continue;
            PYDParameterSet p;
            p.v = static_cast<int>(v);
            p.r = static_cast<int>(r);
            p.e = static_cast<int>(e);
            p.lambda_bibd = Rational(2 * e * (r - 1), v - 1);
            const auto s = static_cast<std::int64_t>(std::llround(std::sqrt(static_cast<double>(v))));
            if (s * s == v && s % 2 == 1 && s >= 3) {
                const int i = static_cast<int>((s + 1) / 2);
                if (pyd_main_series(i).r == r)
                    p.series_index = i;
            }
            out.push_back(p);
        }
    }
    return out;
}

}  // namespace rcd
