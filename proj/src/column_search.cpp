#include "column_search.hpp"

#include <bit>

#include "rcd/canonical.hpp"

namespace rcd::detail {

namespace {

template <class F>
void for_bits(std::uint64_t m, F&& f) {
    while (m) {
        f(std::countr_zero(m));
        m &= m - 1;
    }
}

}  // namespace

ColumnEngine::ColumnEngine(const EngineConfig& cfg) : cfg_(cfg), R_(cfg.r), K_(cfg.c), V_(cfg.v) {
    if (V_ > 64 || R_ > 64 || K_ > 64)
        throw Refused("the column search handles at most 64 rows, columns and symbols");
    if (R_ < 1 || K_ < 1 || (R_ * K_) % V_ != 0)
        throw ParameterError("the column search needs an integral replication number");
    E_ = R_ * K_ / V_;
    lam_cc_ = cfg.lambda_cc;
    cells_.assign(static_cast<std::size_t>(R_) * K_, 0);
    rowmask_.assign(R_, 0);
    colmask_.assign(K_, 0);
    symrows_.assign(V_, 0);
    symcols_.assign(V_, 0);
    count_.assign(V_, 0);
    labels_after_.assign(K_ + 1, 0);
    rr_.assign(static_cast<std::size_t>(R_) * R_, 0);
    rc_.assign(static_cast<std::size_t>(R_) * K_, 0);
    meet_.assign(static_cast<std::size_t>(K_) * K_, 0);
    forced_.assign(K_, 0);
}

bool ColumnEngine::place(int i, Symbol s) {
    const int k = k_;
    bool ok = true;
    int* meet = &meet_[static_cast<std::size_t>(k) * K_];
    const bool cap_cc = cfg_.cc_exact && lam_cc_.has_value();
    for_bits(symcols_[s], [&](int j) {
        if (++meet[j] > (cap_cc ? *lam_cc_ : R_))
            ok = false;
        if (cfg_.rc_bounded && ++rc_[i * K_ + j] > cfg_.lambda_rc)
            ok = false;
    });
    if (cfg_.rr_bounded || cfg_.rc_bounded)
        for_bits(symrows_[s], [&](int i2) {
            if (cfg_.rr_bounded) {
                ++rr_[i2 * R_ + i];
                if (++rr_[i * R_ + i2] > cfg_.lambda_rr)
                    ok = false;
            }
            if (cfg_.rc_bounded && ++rc_[i2 * K_ + k] > cfg_.lambda_rc)
                ok = false;
        });
    if (cfg_.rc_bounded && ++rc_[i * K_ + k] > cfg_.lambda_rc)
        ok = false;
    cells_[static_cast<std::size_t>(k) * R_ + i] = s;
    rowmask_[i] |= std::uint64_t{1} << s;
    colmask_[k] |= std::uint64_t{1} << s;
    symrows_[s] |= std::uint64_t{1} << i;
    symcols_[s] |= std::uint64_t{1} << k;
    if (count_[s]++ == 0)
        next_label_ = s + 1;
    return ok;
}

void ColumnEngine::unplace(int i, Symbol s) {
    const int k = k_;
    rowmask_[i] &= ~(std::uint64_t{1} << s);
    colmask_[k] &= ~(std::uint64_t{1} << s);
    symrows_[s] &= ~(std::uint64_t{1} << i);
    symcols_[s] &= ~(std::uint64_t{1} << k);
    if (--count_[s] == 0)
        next_label_ = s;
    int* meet = &meet_[static_cast<std::size_t>(k) * K_];
    for_bits(symcols_[s], [&](int j) {
        --meet[j];
        if (cfg_.rc_bounded)
            --rc_[i * K_ + j];
    });
    if (cfg_.rr_bounded || cfg_.rc_bounded)
        for_bits(symrows_[s], [&](int i2) {
            if (cfg_.rr_bounded) {
                --rr_[i2 * R_ + i];
                --rr_[i * R_ + i2];
            }
            if (cfg_.rc_bounded)
                --rc_[i2 * K_ + k];
        });
    if (cfg_.rc_bounded)
        --rc_[i * K_ + k];
}

void ColumnEngine::begin_column() {
    const int k = k_;
    std::fill_n(&meet_[static_cast<std::size_t>(k) * K_], K_, 0);
    // Symbols whose remaining occurrences equal the remaining columns.
    std::uint64_t f = 0;
    const int remaining = K_ - k;
    for (int s = 0; s < V_; ++s)
        if (E_ - count_[s] == remaining)
            f |= std::uint64_t{1} << s;
    forced_[k] = f;
}

bool ColumnEngine::column_bounds_hold() const {
    const int k = k_;  // the column just filled
    const int rem = K_ - k - 1;
    for (int s = 0; s < V_; ++s)
        if (E_ - count_[s] > rem)
            return false;
    if (cfg_.rr_bounded) {
        const int need = cfg_.lambda_rr - 2 * rem;
        if (need > 0)
            for (int i = 0; i < R_; ++i)
                for (int i2 = i + 1; i2 < R_; ++i2)
                    if (rr_[i * R_ + i2] < need)
                        return false;
    }
    if (cfg_.rc_bounded) {
        const int need = cfg_.lambda_rc - rem;
        if (need > 0)
            for (int i = 0; i < R_; ++i)
                for (int j = 0; j <= k; ++j)
                    if (rc_[i * K_ + j] < need)
                        return false;
    }
    return true;
}

bool ColumnEngine::passes_shift_filter() const {
    // Moving the new column to position j (keeping rows) gives an isotope
    // whose first j columns are unchanged; if the moved column reads below
    // column j after relabelling, the array is not canonical.
    const int k = k_;
    const Symbol* col = &cells_[static_cast<std::size_t>(k) * R_];
    int map[64];
    for (int j = 1; j < k; ++j) {
        const int lj = labels_after_[j];
        for (int s = lj; s < V_; ++s)
            map[s] = -1;
        int fresh = lj;
        const Symbol* ref = &cells_[static_cast<std::size_t>(j) * R_];
        for (int i = 0; i < R_; ++i) {
            int x = col[i];
            if (x >= lj) {
                if (map[x] < 0)
                    map[x] = fresh++;
                x = map[x];
            }
            if (x < ref[i])
                return false;
            if (x > ref[i])
                break;
        }
    }
    return true;
}

void ColumnEngine::commit() {
    ++k_;
    labels_after_[k_] = next_label_;
}

void ColumnEngine::uncommit() { --k_; }

bool ColumnEngine::tick() {
    ++nodes_;
    if (should_stop && should_stop())
        aborted_ = true;
    return !aborted_;
}

void ColumnEngine::finish_column(int depth, const Prefix* prefix_visit, const Leaf* leaf) {
    const int k = k_;
    ++candidates_;
    bool set_lambda = false;
    if (cfg_.cc_exact && !lam_cc_ && k == 1) {
        lam_cc_ = meet_[static_cast<std::size_t>(K_)];
        set_lambda = true;
    }
    if (column_bounds_hold() && passes_shift_filter()) {
        const auto n = static_cast<std::ptrdiff_t>(k + 1) * R_;
        const Array partial(R_, k + 1, V_, std::vector<Symbol>(cells_.begin(), cells_.begin() + n));
        if (k + 1 == K_) {
            if (auto aut = automorphisms_if_canonical(partial); aut && tick() && leaf)
                (*leaf)(partial, *aut);
        } else if (is_canonical(partial) && tick()) {
            commit();
            if (k_ == depth) {
                if (prefix_visit)
                    (*prefix_visit)(std::vector<Symbol>(cells_.begin(), cells_.begin() + n));
            } else {
                extend(depth, prefix_visit, leaf);
            }
            uncommit();
        }
    }
    if (set_lambda)
        lam_cc_.reset();
}

void ColumnEngine::fill(int i, int depth, const Prefix* prefix_visit, const Leaf* leaf) {
    if (aborted_)
        return;
    const int k = k_;
    if (i == R_) {
        finish_column(depth, prefix_visit, leaf);
        return;
    }
    const std::uint64_t col = colmask_[k];
    const std::uint64_t must = forced_[k] & ~col;
    const int left = R_ - i;
    const int pending = std::popcount(must);
    if (pending > left)
        return;
    const int top = std::min(next_label_, V_ - 1);
    std::uint64_t allowed = (top >= 63 ? ~std::uint64_t{0} : (std::uint64_t{2} << top) - 1) & ~col & ~rowmask_[i];
    if (pending == left)
        allowed &= must;
    const bool cap_cc = cfg_.cc_exact && lam_cc_.has_value();
    const int* meet = &meet_[static_cast<std::size_t>(k) * K_];
    for_bits(allowed, [&](int s) {
        if (aborted_ || count_[s] >= E_)
            return;
        const auto sym = static_cast<Symbol>(s);
        bool ok = place(i, sym);
        if (ok && cap_cc) {
            const int still = R_ - 1 - i;
            for (int j = 0; j < k; ++j)
                if (meet[j] + still < *lam_cc_) {
                    ok = false;
                    break;
                }
        }
        if (ok)
            fill(i + 1, depth, prefix_visit, leaf);
        unplace(i, sym);
    });
}

void ColumnEngine::extend(int depth, const Prefix* prefix_visit, const Leaf* leaf) {
    begin_column();
    fill(0, depth, prefix_visit, leaf);
}

void ColumnEngine::reset() {
    while (k_ > 0) {
        --k_;
        for (int i = R_ - 1; i >= 0; --i)
            unplace(i, cells_[static_cast<std::size_t>(k_) * R_ + i]);
    }
    aborted_ = false;
    lam_cc_ = cfg_.lambda_cc;
}

void ColumnEngine::frontier(int depth, const Prefix& visit) {
    reset();
    // The first column of a canonical array reads 0..R-1.
    std::vector<Symbol> first(R_);
    for (int i = 0; i < R_; ++i)
        first[i] = static_cast<Symbol>(i);
    if (R_ > V_)
        return;
    begin_column();
    for (int i = 0; i < R_; ++i)
        place(i, first[i]);
    if (column_bounds_hold() && tick()) {
        commit();
        if (depth <= 1)
            visit(first);
        else
            extend(depth, &visit, nullptr);
        uncommit();
    }
    for (int i = R_ - 1; i >= 0; --i)
        unplace(i, first[i]);
}

void ColumnEngine::complete(const std::vector<Symbol>& prefix, const Leaf& leaf) {
    reset();
    const int cols = static_cast<int>(prefix.size()) / R_;
    for (int j = 0; j < cols; ++j) {
        begin_column();
        for (int i = 0; i < R_; ++i)
            place(i, prefix[static_cast<std::size_t>(j) * R_ + i]);
        if (cfg_.cc_exact && !lam_cc_ && j == 1)
            lam_cc_ = meet_[static_cast<std::size_t>(K_)];
        commit();
    }
    if (cols == K_) {
        const Array a(R_, K_, V_, prefix);
        if (auto aut = automorphisms_if_canonical(a))
            leaf(a, *aut);
    } else {
        extend(K_, nullptr, &leaf);
    }
    reset();
}

}  // namespace rcd::detail
