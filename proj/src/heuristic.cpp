#include "rcd/heuristic.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <mutex>
#include <thread>

#include "rcd/params.hpp"

namespace rcd {

HeuristicTarget heuristic_target(int v, int r, int c, Label label) {
    const ParameterSet p = derive(v, r, c);
    HeuristicTarget t;
    t.label = label;
    const bool rr = label == Label::TA || label == Label::DA || label == Label::SA || label == Label::MAT;
    const bool cc = label == Label::TA || label == Label::DA || label == Label::SAT || label == Label::MA;
    const bool rc = label == Label::TA || label == Label::SA || label == Label::SAT || label == Label::AO;
    if (label == Label::none)
        throw ParameterError("local search needs a design type");
    if (!p.e_int())
        throw Refused("e = rc/v is not an integer");
    if (rr) {
        if (!p.lambda_rr_int())
            throw Refused("row-row intersection c(e-1)/(r-1) is not an integer");
        t.lambda_rr = p.lambda_rr_int();
    }
    if (cc) {
        if (!p.lambda_cc_int())
            throw Refused("column-column intersection r(e-1)/(c-1) is not an integer");
        t.lambda_cc = p.lambda_cc_int();
    }
    if (rc)
        t.lambda_rc = p.e_int();
    return t;
}

namespace {

// Incidence tables plus intersection matrices, updated per swap.
class State {
  public:
    State(const Array& a, const HeuristicTarget& t) : a_(a), t_(t), R_(a.rows()), C_(a.cols()), V_(a.symbols()) {
        row_has_.assign(static_cast<std::size_t>(R_) * V_, 0);
        col_has_.assign(static_cast<std::size_t>(C_) * V_, 0);
        for (int j = 0; j < C_; ++j)
            for (int i = 0; i < R_; ++i) {
                row_has_[i * V_ + a.at(i, j)] = 1;
                col_has_[j * V_ + a.at(i, j)] = 1;
            }
        rr_.assign(static_cast<std::size_t>(R_) * R_, 0);
        cc_.assign(static_cast<std::size_t>(C_) * C_, 0);
        rc_.assign(static_cast<std::size_t>(R_) * C_, 0);
        for (int s = 0; s < V_; ++s) {
            for (int i = 0; i < R_; ++i) {
                if (!row_has_[i * V_ + s])
                    continue;
                for (int i2 = 0; i2 < R_; ++i2)
                    rr_[i * R_ + i2] += row_has_[i2 * V_ + s];
                for (int j = 0; j < C_; ++j)
                    rc_[i * C_ + j] += col_has_[j * V_ + s];
            }
            for (int j = 0; j < C_; ++j)
                if (col_has_[j * V_ + s])
                    for (int j2 = 0; j2 < C_; ++j2)
                        cc_[j * C_ + j2] += col_has_[j2 * V_ + s];
        }
        total_ = full_violations();
    }

    long long total() const { return total_; }
    const Array& array() const { return a_; }

    // Exchange (i, j1) and (i, j2). Returns the violation change, or nothing
    // when the swap breaks binarity.
    std::optional<long long> row_swap_delta(int i, int j1, int j2) const {
        const int x = a_.at(i, j1), y = a_.at(i, j2);
        if (col_has_[j1 * V_ + y] || col_has_[j2 * V_ + x])
            return std::nullopt;
        long long d = 0;
        if (t_.lambda_cc)
            for (int j = 0; j < C_; ++j) {
                if (j == j1 || j == j2)
                    continue;
                const int diff = col_has_[j * V_ + y] - col_has_[j * V_ + x];
                d += change(cc_[j1 * C_ + j], diff, *t_.lambda_cc) + change(cc_[j2 * C_ + j], -diff, *t_.lambda_cc);
            }
        if (t_.lambda_rc)
            for (int i2 = 0; i2 < R_; ++i2) {
                const int diff = row_has_[i2 * V_ + y] - row_has_[i2 * V_ + x];
                d += change(rc_[i2 * C_ + j1], diff, *t_.lambda_rc) + change(rc_[i2 * C_ + j2], -diff, *t_.lambda_rc);
            }
        return d;
    }

    std::optional<long long> col_swap_delta(int j, int i1, int i2) const {
        const int x = a_.at(i1, j), y = a_.at(i2, j);
        if (row_has_[i1 * V_ + y] || row_has_[i2 * V_ + x])
            return std::nullopt;
        long long d = 0;
        if (t_.lambda_rr)
            for (int i = 0; i < R_; ++i) {
                if (i == i1 || i == i2)
                    continue;
                const int diff = row_has_[i * V_ + y] - row_has_[i * V_ + x];
                d += change(rr_[i1 * R_ + i], diff, *t_.lambda_rr) + change(rr_[i2 * R_ + i], -diff, *t_.lambda_rr);
            }
        if (t_.lambda_rc)
            for (int j2 = 0; j2 < C_; ++j2) {
                const int diff = col_has_[j2 * V_ + y] - col_has_[j2 * V_ + x];
                d += change(rc_[i1 * C_ + j2], diff, *t_.lambda_rc) + change(rc_[i2 * C_ + j2], -diff, *t_.lambda_rc);
            }
        return d;
    }

    void apply_row_swap(int i, int j1, int j2, long long delta) {
        const int x = a_.at(i, j1), y = a_.at(i, j2);
        for (int j = 0; j < C_; ++j) {
            if (j == j1 || j == j2)
                continue;
            const int diff = col_has_[j * V_ + y] - col_has_[j * V_ + x];
            bump(cc_, C_, j1, j, diff);
            bump(cc_, C_, j2, j, -diff);
        }
        for (int i2 = 0; i2 < R_; ++i2) {
            const int diff = row_has_[i2 * V_ + y] - row_has_[i2 * V_ + x];
            rc_[i2 * C_ + j1] += diff;
            rc_[i2 * C_ + j2] -= diff;
        }
        col_has_[j1 * V_ + x] = 0;
        col_has_[j1 * V_ + y] = 1;
        col_has_[j2 * V_ + y] = 0;
        col_has_[j2 * V_ + x] = 1;
        a_.set(i, j1, static_cast<Symbol>(y));
        a_.set(i, j2, static_cast<Symbol>(x));
        total_ += delta;
    }

    void apply_col_swap(int j, int i1, int i2, long long delta) {
        const int x = a_.at(i1, j), y = a_.at(i2, j);
        for (int i = 0; i < R_; ++i) {
            if (i == i1 || i == i2)
                continue;
            const int diff = row_has_[i * V_ + y] - row_has_[i * V_ + x];
            bump(rr_, R_, i1, i, diff);
            bump(rr_, R_, i2, i, -diff);
        }
        for (int j2 = 0; j2 < C_; ++j2) {
            const int diff = col_has_[j2 * V_ + y] - col_has_[j2 * V_ + x];
            rc_[i1 * C_ + j2] += diff;
            rc_[i2 * C_ + j2] -= diff;
        }
        row_has_[i1 * V_ + x] = 0;
        row_has_[i1 * V_ + y] = 1;
        row_has_[i2 * V_ + y] = 0;
        row_has_[i2 * V_ + x] = 1;
        a_.set(i1, j, static_cast<Symbol>(y));
        a_.set(i2, j, static_cast<Symbol>(x));
        total_ += delta;
    }

  private:
    static long long change(int value, int diff, int lambda) {
        return std::llabs(value + diff - lambda) - std::llabs(value - lambda);
    }

    static void bump(std::vector<int>& m, int n, int a, int b, int diff) {
        m[a * n + b] += diff;
        m[b * n + a] += diff;
    }

    long long full_violations() const {
        long long v = 0;
        if (t_.lambda_rr)
            for (int i = 0; i < R_; ++i)
                for (int i2 = i + 1; i2 < R_; ++i2)
                    v += std::llabs(rr_[i * R_ + i2] - *t_.lambda_rr);
        if (t_.lambda_cc)
            for (int j = 0; j < C_; ++j)
                for (int j2 = j + 1; j2 < C_; ++j2)
                    v += std::llabs(cc_[j * C_ + j2] - *t_.lambda_cc);
        if (t_.lambda_rc)
            for (std::size_t k = 0; k < rc_.size(); ++k)
                v += std::llabs(rc_[k] - *t_.lambda_rc);
        return v;
    }

    Array a_;
    HeuristicTarget t_;
    int R_, C_, V_;
    std::vector<char> row_has_, col_has_;
    std::vector<int> rr_, cc_, rc_;
    long long total_ = 0;
};

struct Move {
    bool row;  // same-row swap (line = row) or same-column swap (line = column)
    int line, p, q;
};

struct RestartOutcome {
    std::optional<Array> array;
    long long best = -1;
    std::uint64_t moves = 0;
};

RestartOutcome descend(int v, int r, int c, const HeuristicTarget& target, std::uint64_t seed,
                       std::uint64_t max_steps, int restart, const SearchObserver& observer) {
    RestartOutcome out;
    std::mt19937_64 rng(seed);
    auto start = random_equireplicate(v, r, c, rng);
    if (!start)
        return out;
    State st(*start, target);
    if (observer)
        observer(restart, st.array(), st.total());
    std::vector<Move> moves;
    for (int i = 0; i < r; ++i)
        for (int j1 = 0; j1 < c; ++j1)
            for (int j2 = j1 + 1; j2 < c; ++j2)
                moves.push_back({true, i, j1, j2});
    for (int j = 0; j < c; ++j)
        for (int i1 = 0; i1 < r; ++i1)
            for (int i2 = i1 + 1; i2 < r; ++i2)
                moves.push_back({false, j, i1, i2});
    std::uint64_t evaluated = 0;
    out.best = st.total();
    while (st.total() > 0 && evaluated < max_steps) {
        std::shuffle(moves.begin(), moves.end(), rng);
        bool improved = false;
        for (const Move& m : moves) {
            if (++evaluated > max_steps)
                break;
            const auto d = m.row ? st.row_swap_delta(m.line, m.p, m.q) : st.col_swap_delta(m.line, m.p, m.q);
            if (!d || *d >= 0)
                continue;
            if (m.row)
                st.apply_row_swap(m.line, m.p, m.q, *d);
            else
                st.apply_col_swap(m.line, m.p, m.q, *d);
            ++out.moves;
            if (observer)
                observer(restart, st.array(), st.total());
            improved = true;
            break;
        }
        out.best = std::min(out.best, st.total());
        if (!improved)
            break;  // local minimum
    }
    if (st.total() == 0)
        out.array = st.array();
    return out;
}

}  // namespace

long long violations(const Array& a, const HeuristicTarget& target) { return State(a, target).total(); }

std::optional<Array> random_equireplicate(int v, int r, int c, std::mt19937_64& rng, std::uint64_t node_budget) {
    if ((static_cast<long long>(r) * c) % v != 0 || r > v || c > v)
        return std::nullopt;
    const int e = r * c / v;
    Array a(r, c, v);
    std::vector<int> count(v, 0);
    std::vector<char> row_has(static_cast<std::size_t>(r) * v, 0), col_has(static_cast<std::size_t>(c) * v, 0);
    std::uint64_t nodes = 0;
    std::vector<std::vector<int>> order(static_cast<std::size_t>(r) * c);
    // Cells in column-major order; each symbol must still fit in the
    // columns left after the current one.
    auto rec = [&](auto&& self, int cell) -> bool {
        if (cell == r * c)
            return true;
        if (++nodes > node_budget)
            return false;
        const int j = cell / r, i = cell % r;
        if (i == 0) {
            const int left = c - j;
            for (int s = 0; s < v; ++s)
                if (e - count[s] > left)
                    return false;
        }
        auto& cand = order[cell];
        cand.resize(v);
        for (int s = 0; s < v; ++s)
            cand[s] = s;
        std::shuffle(cand.begin(), cand.end(), rng);
        // Symbols that must appear in every remaining column go first.
        std::stable_partition(cand.begin(), cand.end(), [&](int s) { return e - count[s] == c - j; });
        for (int s : cand) {
            if (count[s] >= e || row_has[i * v + s] || col_has[j * v + s])
                continue;
            a.set(i, j, static_cast<Symbol>(s));
            ++count[s];
            row_has[i * v + s] = col_has[j * v + s] = 1;
            if (self(self, cell + 1))
                return true;
            --count[s];
            row_has[i * v + s] = col_has[j * v + s] = 0;
            if (nodes > node_budget)
                return false;
        }
        return false;
    };
    for (int attempt = 0; attempt < 20; ++attempt) {
        nodes = 0;
        if (rec(rec, 0))
            return a;
        std::fill(count.begin(), count.end(), 0);
        std::fill(row_has.begin(), row_has.end(), 0);
        std::fill(col_has.begin(), col_has.end(), 0);
    }
    return std::nullopt;
}

LocalSearchResult local_search(int v, int r, int c, Label label, std::uint64_t seed, int max_restarts,
                               std::uint64_t max_steps, int jobs, const SearchObserver& observer) {
    const HeuristicTarget target = heuristic_target(v, r, c, label);
    LocalSearchResult res;
    std::mutex mu;
    std::atomic<int> next{0};
    std::atomic<int> winner{max_restarts};
    std::vector<RestartOutcome> outcomes(static_cast<std::size_t>(std::max(0, max_restarts)));
    auto worker = [&]() {
        for (;;) {
            const int t = next.fetch_add(1);
            if (t >= max_restarts || t > winner.load())
                return;
            RestartOutcome o = descend(v, r, c, target, seed + static_cast<std::uint64_t>(t), max_steps, t, observer);
            const bool ok = o.array.has_value();
            outcomes[t] = std::move(o);
            if (ok) {
                std::lock_guard lock(mu);
                if (t < winner)
                    winner = t;
            }
        }
    };
    jobs = std::max(1, jobs);
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < jobs; ++i)
            pool.emplace_back(worker);
        for (auto& th : pool)
            th.join();
    }
    // Report as if restarts ran in order up to the winner.
    const int last = std::min(winner.load(), max_restarts - 1);
    for (int t = 0; t <= last; ++t) {
        const auto& o = outcomes[t];
        res.restarts = t + 1;
        res.moves += o.moves;
        if (o.best >= 0 && (res.best_violations < 0 || o.best < res.best_violations))
            res.best_violations = o.best;
    }
    if (winner < max_restarts) {
        res.found = true;
        res.array = outcomes[winner].array;
        res.classification = classify(*res.array);
        res.proper = res.classification.label == label;
    }
    return res;
}

}  // namespace rcd
