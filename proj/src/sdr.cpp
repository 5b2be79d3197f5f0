#include <algorithm>
#include <numeric>
#include <set>

#include "rcd/canonical.hpp"
#include "rcd/enumerate.hpp"
#include "rcd/params.hpp"

namespace rcd {

namespace {

// Incidence structures: v symbols, c blocks of size r, every symbol in e
// blocks, optionally all block pairs meeting in lambda symbols. Symbol rows
// are generated in non-increasing order to cut down symbol relabellings;
// block relabellings are removed afterwards.
class DesignSearch {
  public:
    DesignSearch(int v, int r, int c, int e, std::optional<int> lambda)
        : v_(v), r_(r), c_(c), e_(e), lambda_(lambda) {
        std::vector<int> pick(c_, 0);
        std::fill(pick.begin(), pick.begin() + e_, 1);
        // Bitmasks of e-subsets of the blocks, in decreasing order.
        std::sort(pick.begin(), pick.end());
        do {
            unsigned m = 0;
            for (int j = 0; j < c_; ++j)
                if (pick[j])
                    m |= 1u << j;
            subsets_.push_back(m);
        } while (std::next_permutation(pick.begin(), pick.end()));
        std::sort(subsets_.rbegin(), subsets_.rend());
        sums_.assign(c_, 0);
        meet_.assign(static_cast<std::size_t>(c_) * c_, 0);
    }

    std::set<std::vector<unsigned>> run() {
        rows_.clear();
        go(0, 0);
        return found_;
    }

  private:
    void go(int sym, std::size_t from) {
        if (sym == v_) {
            if (lambda_)
                for (int a = 0; a < c_; ++a)
                    for (int b = a + 1; b < c_; ++b)
                        if (meet_[a * c_ + b] != *lambda_)
                            return;
            found_.insert(normal_form());
            return;
        }
        for (std::size_t s = from; s < subsets_.size(); ++s) {
            const unsigned m = subsets_[s];
            bool ok = true;
            for (int j = 0; j < c_ && ok; ++j)
                if ((m >> j & 1) && sums_[j] + 1 > r_)
                    ok = false;
            // Enough room left for the remaining symbols to fill every block.
            if (!ok)
                continue;
            apply(m, 1);
            if (lambda_)
                for (int a = 0; a < c_ && ok; ++a)
                    for (int b = a + 1; b < c_; ++b)
                        if (meet_[a * c_ + b] > *lambda_) {
                            ok = false;
                            break;
                        }
            if (ok) {
                const int left = v_ - sym - 1;
                for (int j = 0; j < c_; ++j)
                    if (sums_[j] + left * 1 < r_ && r_ - sums_[j] > left)
                        ok = false;
            }
            if (ok) {
                rows_.push_back(m);
                go(sym + 1, s);
                rows_.pop_back();
            }
            apply(m, -1);
        }
    }

    void apply(unsigned m, int d) {
        for (int a = 0; a < c_; ++a) {
            if (!(m >> a & 1))
                continue;
            sums_[a] += d;
            for (int b = a + 1; b < c_; ++b)
                if (m >> b & 1)
                    meet_[a * c_ + b] += d;
        }
    }

    // Least sorted row list over all block permutations.
    std::vector<unsigned> normal_form() const {
        std::vector<int> perm(c_);
        std::iota(perm.begin(), perm.end(), 0);
        std::vector<unsigned> best;
        do {
            std::vector<unsigned> rows;
            rows.reserve(rows_.size());
            for (unsigned m : rows_) {
                unsigned t = 0;
                for (int j = 0; j < c_; ++j)
                    if (m >> j & 1)
                        t |= 1u << perm[j];
                rows.push_back(t);
            }
            std::sort(rows.begin(), rows.end());
            if (best.empty() || rows < best)
                best = std::move(rows);
        } while (std::next_permutation(perm.begin(), perm.end()));
        return best;
    }

    int v_, r_, c_, e_;
    std::optional<int> lambda_;
    std::vector<unsigned> subsets_;
    std::vector<unsigned> rows_;
    std::vector<int> sums_;
    std::vector<int> meet_;
    std::set<std::vector<unsigned>> found_;
};

// Orders a design into arrays: each row is a system of distinct
// representatives of the blocks, and the rows partition every block.
class Orderer {
  public:
    Orderer(int v, int r, int c, const std::vector<unsigned>& incidence, std::set<Array>& out,
            std::uint64_t& produced, std::uint64_t budget)
        : v_(v), r_(r), c_(c), out_(out), produced_(produced), budget_(budget) {
        blocks_.assign(c_, {});
        for (int s = 0; s < v_; ++s)
            for (int j = 0; j < c_; ++j)
                if (incidence[s] >> j & 1)
                    blocks_[j].push_back(s);
        cells_.assign(static_cast<std::size_t>(r_) * c_, 0);
        row_has_.assign(static_cast<std::size_t>(r_) * v_, 0);
    }

    bool run() {
        // Row symmetry: block 0 is written in sorted order.
        for (int i = 0; i < r_; ++i)
            put(i, 0, blocks_[0][i], 1);
        const bool ok = column(1);
        for (int i = 0; i < r_; ++i)
            put(i, 0, blocks_[0][i], -1);
        return ok;
    }

  private:
    void put(int i, int j, int s, int d) {
        cells_[static_cast<std::size_t>(j) * r_ + i] = static_cast<Symbol>(s);
        row_has_[static_cast<std::size_t>(i) * v_ + s] += d;
    }

    bool column(int j) {
        if (j == c_) {
            if (++produced_ > budget_)
                return false;
            out_.insert(canonical(Array(r_, c_, v_, cells_)).array);
            return true;
        }
        std::vector<int> perm(blocks_[j]);
        std::sort(perm.begin(), perm.end());
        do {
            bool ok = true;
            for (int i = 0; i < r_ && ok; ++i)
                ok = row_has_[static_cast<std::size_t>(i) * v_ + perm[i]] == 0;
            if (!ok)
                continue;
            for (int i = 0; i < r_; ++i)
                put(i, j, perm[i], 1);
            const bool cont = column(j + 1);
            for (int i = 0; i < r_; ++i)
                put(i, j, perm[i], -1);
            if (!cont)
                return false;
        } while (std::next_permutation(perm.begin(), perm.end()));
        return true;
    }

    int v_, r_, c_;
    std::set<Array>& out_;
    std::uint64_t& produced_;
    std::uint64_t budget_;
    std::vector<std::vector<int>> blocks_;
    std::vector<Symbol> cells_;
    std::vector<int> row_has_;
};

}  // namespace

EnumerationReport enumerate_via_sdr(const SearchTarget& target, std::uint64_t array_budget) {
    EnumerationReport rep;
    rep.target = target;
    const std::string reason = inadmissibility_reason(target);
    if (!reason.empty() && !target.force) {
        rep.status = RunStatus::refused;
        rep.reason = reason;
        return rep;
    }
    if (target.c > 12 || target.r > 12 || target.v > 32)
        throw Refused("the block-design generator only handles tiny parameters");
    const ParameterSet p = derive(target.v, target.r, target.c);
    if (!p.e_int())
        return rep;
    // Constant rows are constant columns of the transpose.
    const bool flip = target.mode == SearchMode::constant_rows;
    const int r = flip ? target.c : target.r, c = flip ? target.r : target.c;
    std::optional<int> lambda;
    if (target.mode == SearchMode::constant_columns || target.mode == SearchMode::constant_rows) {
        lambda = flip ? p.lambda_rr_int() : p.lambda_cc_int();
        if (!lambda)
            return rep;
    }
    DesignSearch designs(target.v, r, c, *p.e_int(), lambda);
    std::set<Array> arrays;
    std::uint64_t produced = 0;
    for (const auto& d : designs.run()) {
        Orderer o(target.v, r, c, d, arrays, produced, array_budget);
        if (!o.run()) {
            rep.status = RunStatus::budget_exceeded;
            rep.reason = "array budget of " + std::to_string(array_budget) + " exhausted";
            break;
        }
    }
    for (const Array& found : arrays) {
        CanonicalForm f = flip ? canonical(transpose(found)) : CanonicalForm{found, 0};
        if (!flip)
            f.aut_order = *automorphisms_if_canonical(found);
        const DesignClassification cls = classify(f.array);
        const bool wanted = (!target.require_rr || cls.rr) && (!target.require_cc || cls.cc) &&
                            (!target.require_rc || cls.rc) &&
                            (target.mode != SearchMode::adjusted_orthogonal || cls.rc) &&
                            (target.mode != SearchMode::constant_lines || cls.rr || cls.cc);
        if (!wanted)
            continue;
        rep.counts[cls.label]++;
        rep.histogram[cls.label][f.aut_order]++;
        if (target.keep_representatives)
            rep.representatives[cls.label].push_back({f.array, f.aut_order});
    }
    for (auto& [_, v] : rep.representatives)
        std::sort(v.begin(), v.end(), [](const Representative& a, const Representative& b) { return a.array < b.array; });
    return rep;
}

}  // namespace rcd
