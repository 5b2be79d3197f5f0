#include <algorithm>

#include "pb_internal.hpp"
#include "rcd/satgen.hpp"

namespace rcd {

std::string_view solve_status_name(SolveStatus s) {
    switch (s) {
        case SolveStatus::sat: return "sat";
        case SolveStatus::unsat: return "unsat";
        case SolveStatus::budget_exceeded: return "budget_exceeded";
    }
    return "budget_exceeded";
}

namespace {

// Literal codes: 2*var for the positive literal, 2*var + 1 for the negation.
int code(int dimacs) { return dimacs > 0 ? 2 * dimacs : 2 * -dimacs + 1; }

class Solver {
  public:
    explicit Solver(const PBModel& m) : n_(m.num_vars) {
        value_.assign(n_ + 1, -1);
        occ_.assign(2 * (n_ + 1), {});
        for (const auto& k : m.constraints)
            for (auto& norm : detail::normalize(k)) {
                Cons c;
                c.bound = norm.bound;
                for (const auto& l : norm.lits)
                    c.lits.push_back({code(l.lit), l.weight});
                std::sort(c.lits.begin(), c.lits.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
                long long total = 0;
                for (const auto& [lit, w] : c.lits)
                    total += w;
                c.slack = total - c.bound;
                const int id = static_cast<int>(cons_.size());
                for (const auto& [lit, w] : c.lits)
                    occ_[lit].push_back({id, w});
                cons_.push_back(std::move(c));
            }
    }

    SolveResult run(std::uint64_t budget) {
        SolveResult res;
        // Level-zero propagation over every constraint once.
        for (std::size_t id = 0; id < cons_.size(); ++id)
            if (!check(static_cast<int>(id))) {
                res.status = SolveStatus::unsat;
                return res;
            }
        if (!propagate()) {
            res.status = SolveStatus::unsat;
            return res;
        }
        struct Decision {
            int var;
            std::size_t trail_size;
            bool flipped;
        };
        std::vector<Decision> stack;
        int next_var = 1;
        for (;;) {
            while (next_var <= n_ && value_[next_var] >= 0)
                ++next_var;
            if (next_var > n_) {
                res.status = SolveStatus::sat;
                res.assignment.assign(n_ + 1, false);
                for (int v = 1; v <= n_; ++v)
                    res.assignment[v] = value_[v] == 1;
                return res;
            }
            if (++res.nodes > budget) {
                res.status = SolveStatus::budget_exceeded;
                return res;
            }
            stack.push_back({next_var, trail_.size(), false});
            bool ok = assign(2 * next_var) && propagate();
            while (!ok) {
                // Undo to the latest decision not yet flipped.
                while (!stack.empty() && stack.back().flipped) {
                    undo(stack.back().trail_size);
                    stack.pop_back();
                }
                if (stack.empty()) {
                    res.status = SolveStatus::unsat;
                    return res;
                }
                Decision& d = stack.back();
                undo(d.trail_size);
                d.flipped = true;
                ok = assign(2 * d.var + 1) && propagate();
            }
            next_var = 1;
        }
    }

  private:
    struct Cons {
        std::vector<std::pair<int, long long>> lits;
        long long bound = 0;
        long long slack = 0;  // weight of non-false literals minus bound
    };

    bool is_true(int lit) const {
        const int v = value_[lit >> 1];
        return v >= 0 && v == ((lit & 1) ? 0 : 1);
    }
    bool is_unassigned(int lit) const { return value_[lit >> 1] < 0; }

    // Makes lit true. Constraints holding its negation lose slack.
    bool assign(int lit) {
        const int var = lit >> 1;
        if (value_[var] >= 0)
            return is_true(lit);
        value_[var] = (lit & 1) ? 0 : 1;
        trail_.push_back(lit);
        return true;
    }

    bool check(int id) {
        Cons& c = cons_[id];
        if (c.slack < 0)
            return false;
        for (const auto& [lit, w] : c.lits) {
            if (w <= c.slack)
                break;
            if (is_unassigned(lit) && !assign(lit))
                return false;
        }
        return true;
    }

    bool propagate() {
        while (head_ < trail_.size()) {
            const int lit = trail_[head_++];
            const int falsified = lit ^ 1;
            bool ok = true;
            for (const auto& [id, w] : occ_[falsified])
                cons_[id].slack -= w;
            for (const auto& [id, w] : occ_[falsified])
                if (ok && !check(id))
                    ok = false;
            if (!ok)
                return false;
        }
        return true;
    }

    void undo(std::size_t size) {
        while (trail_.size() > size) {
            const int lit = trail_.back();
            trail_.pop_back();
            if (head_ > trail_.size()) {
                for (const auto& [id, w] : occ_[lit ^ 1])
                    cons_[id].slack += w;
            }
            value_[lit >> 1] = -1;
        }
        head_ = std::min(head_, trail_.size());
    }

    int n_;
    std::vector<int> value_;
    std::vector<std::vector<std::pair<int, long long>>> occ_;
    std::vector<Cons> cons_;
    std::vector<int> trail_;
    std::size_t head_ = 0;
};

}  // namespace

SolveResult naive_solve(const PBModel& m, std::uint64_t node_budget) {
    Solver s(m);
    SolveResult res = s.run(node_budget);
    if (res.status == SolveStatus::sat)
        res.array = decode(m, res.assignment);
    return res;
}

}  // namespace rcd
