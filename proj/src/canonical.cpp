#include "rcd/canonical.hpp"

#include <algorithm>
#include <map>

namespace rcd {

namespace {

// Search over (row order, column order) for the least column-major sequence
// after first-occurrence relabelling.
//
// The first column of any candidate reads 0..R-1, so only the choice of
// source column a matters there. The second source column b then fixes the
// row order: each position either takes a free row (branch) or is already
// pinned because an earlier entry referred to a column-a symbol of that row.
// With rows fixed, remaining columns are chosen greedily with branching on
// ties. Leaves equal to the minimum are autotopisms.
class Search {
  public:
    Search(const Array& a, bool test) : A_(a), R_(a.rows()), K_(a.cols()), V_(a.symbols()), test_(test) {
        row_in_.assign(static_cast<std::size_t>(K_) * V_, -1);
        for (int j = 0; j < K_; ++j)
            for (int i = 0; i < R_; ++i)
                row_in_[j * V_ + a.at(i, j)] = i;
        const Array start = relabel_first_occurrence(a);
        best_.assign(start.cells().begin(), start.cells().end());
        row_at_.assign(R_, -1);
        pos_of_.assign(R_, -1);
        label_.assign(V_, -1);
        used_.assign(K_, 0);
        cand_.assign(static_cast<std::size_t>(K_) * R_, 0);
    }

    void run() {
        for (int a = 0; a < K_ && !smaller_; ++a) {
            a_ = a;
            used_[a] = 1;
            for (int b = 0; b < K_ && !smaller_; ++b) {
                if (b == a)
                    continue;
                b_ = b;
                used_[b] = 1;
                next_new_ = R_;
                stage_b(0, false);
                used_[b] = 0;
            }
            used_[a] = 0;
        }
    }

    bool found_smaller() const { return smaller_; }
    std::uint64_t count() const { return count_; }
    const std::vector<int>& best() const { return best_; }

  private:
    // -1: prune, 0: still equal to best, 1: now strictly below best.
    int compare(std::size_t idx, int x, bool less) {
        if (less) {
            best_[idx] = x;
            return 1;
        }
        if (x > best_[idx])
            return -1;
        if (x < best_[idx]) {
            if (test_) {
                smaller_ = true;
                return -1;
            }
            best_[idx] = x;
            return 1;
        }
        return 0;
    }

    void place(int row, int pos) {
        row_at_[pos] = row;
        pos_of_[row] = pos;
        set_label(A_.at(row, a_), pos);
        ++filled_;
    }

    void set_label(int s, int x) {
        label_[s] = x;
        trail_.push_back(s);
    }

    void undo_to(std::size_t trail_mark, int filled_mark) {
        while (trail_.size() > trail_mark) {
            label_[trail_.back()] = -1;
            trail_.pop_back();
        }
        while (filled_ > filled_mark) {
            --filled_;
            pos_of_[row_at_[filled_]] = -1;
            row_at_[filled_] = -1;
        }
    }

    // Value of the column-b entry of `row` if it sat at a position already
    // assigned, with `next_free` the first unassigned position.
    int value_of(int row, int next_free) const {
        const int s = A_.at(row, b_);
        if (label_[s] >= 0)
            return label_[s];
        if (row_in_[a_ * V_ + s] >= 0)
            return next_free;
        return next_new_;
    }

    // Assigns the label for the column-b entry of `row`, pinning rows as needed.
    void commit_b(int row) {
        const int s = A_.at(row, b_);
        if (label_[s] >= 0)
            return;
        const int partner = row_in_[a_ * V_ + s];
        if (partner >= 0)
            place(partner, filled_);
        else
            set_label(s, next_new_++);
    }

    void stage_b(int i, bool less) {
        if (smaller_)
            return;
        if (i == R_) {
            stage_c(2, less);
            return;
        }
        const std::size_t idx = static_cast<std::size_t>(R_) + i;
        const std::size_t trail_mark = trail_.size();
        const int filled_mark = filled_;
        const int new_mark = next_new_;
        if (i < filled_) {
            const int row = row_at_[i];
            const int x = value_of(row, filled_);
            const int c = compare(idx, x, less);
            if (c < 0)
                return;
            commit_b(row);
            stage_b(i + 1, c > 0);
            undo_to(trail_mark, filled_mark);
            next_new_ = new_mark;
            return;
        }
        // Free position: the row placed here takes label i for its column-a
        // symbol; a partner would go to position i + 1.
        int min_x = 1 << 30;
        for (int row = 0; row < R_; ++row) {
            if (pos_of_[row] >= 0)
                continue;
            min_x = std::min(min_x, value_of(row, i + 1));
        }
        const int c = compare(idx, min_x, less);
        if (c < 0)
            return;
        bool sub_less = c > 0;
        for (int row = 0; row < R_ && !smaller_; ++row) {
            if (pos_of_[row] >= 0 || value_of(row, i + 1) != min_x)
                continue;
            place(row, i);
            commit_b(row);
            stage_b(i + 1, sub_less);
            undo_to(trail_mark, filled_mark);
            next_new_ = new_mark;
            sub_less = false;
        }
    }

    void stage_c(int k, bool less) {
        if (smaller_)
            return;
        if (k == K_) {
            count_ = less ? 1 : count_ + 1;
            return;
        }
        // Relabelled candidate column for every unused source column.
        int min_col = -1;
        for (int j = 0; j < K_; ++j) {
            if (used_[j])
                continue;
            int* out = &cand_[static_cast<std::size_t>(j) * R_];
            int fresh = next_new_;
            tmp_.assign(V_, -1);
            for (int i = 0; i < R_; ++i) {
                const int s = A_.at(row_at_[i], j);
                if (label_[s] >= 0)
                    out[i] = label_[s];
                else {
                    if (tmp_[s] < 0)
                        tmp_[s] = fresh++;
                    out[i] = tmp_[s];
                }
            }
            if (min_col < 0 || std::lexicographical_compare(out, out + R_, &cand_[min_col * R_],
                                                            &cand_[min_col * R_] + R_))
                min_col = j;
        }
        const int* m = &cand_[static_cast<std::size_t>(min_col) * R_];
        const std::size_t base = static_cast<std::size_t>(k) * R_;
        bool sub_less = less;
        if (!less) {
            for (int i = 0; i < R_; ++i) {
                if (m[i] == best_[base + i])
                    continue;
                if (m[i] > best_[base + i])
                    return;
                if (test_) {
                    smaller_ = true;
                    return;
                }
                sub_less = true;
                break;
            }
        }
        // Snapshot the minimum, cand_ is overwritten deeper down.
        std::vector<int> minimum(m, m + R_);
        std::vector<int> ties;
        for (int j = 0; j < K_; ++j)
            if (!used_[j] && std::equal(minimum.begin(), minimum.end(), &cand_[static_cast<std::size_t>(j) * R_]))
                ties.push_back(j);
        if (sub_less)
            std::copy(minimum.begin(), minimum.end(), best_.begin() + static_cast<std::ptrdiff_t>(base));
        const std::size_t trail_mark = trail_.size();
        const int new_mark = next_new_;
        for (int j : ties) {
            if (smaller_)
                return;
            for (int i = 0; i < R_; ++i) {
                const int s = A_.at(row_at_[i], j);
                if (label_[s] < 0)
                    set_label(s, next_new_++);
            }
            used_[j] = 1;
            stage_c(k + 1, sub_less);
            used_[j] = 0;
            undo_to(trail_mark, filled_);
            next_new_ = new_mark;
            sub_less = false;
        }
    }

    const Array& A_;
    const int R_, K_, V_;
    const bool test_;
    std::vector<int> row_in_;
    std::vector<int> best_;
    std::vector<int> row_at_, pos_of_, label_;
    std::vector<char> used_;
    std::vector<int> trail_;
    std::vector<int> cand_;
    std::vector<int> tmp_;
    int a_ = 0, b_ = 0;
    int filled_ = 0;
    int next_new_ = 0;
    bool smaller_ = false;
    std::uint64_t count_ = 0;
};

std::uint64_t factorial(int n) {
    std::uint64_t f = 1;
    for (int i = 2; i <= n; ++i)
        f *= static_cast<std::uint64_t>(i);
    return f;
}

}  // namespace

CanonicalForm canonical(const Array& a) {
    if (a.cols() <= 1 || a.rows() == 0) {
        Array c = relabel_first_occurrence(a);
        return {c, factorial(a.rows())};
    }
    Search s(a, false);
    s.run();
    std::vector<Symbol> cells(s.best().begin(), s.best().end());
    return {Array(a.rows(), a.cols(), a.symbols(), std::move(cells)), s.count()};
}

bool is_canonical(const Array& a) {
    if (relabel_first_occurrence(a) != a)
        return false;
    if (a.cols() <= 1 || a.rows() == 0)
        return true;
    Search s(a, true);
    s.run();
    return !s.found_smaller();
}

std::optional<std::uint64_t> automorphisms_if_canonical(const Array& a) {
    if (relabel_first_occurrence(a) != a)
        return std::nullopt;
    if (a.cols() <= 1 || a.rows() == 0)
        return factorial(a.rows());
    Search s(a, true);
    s.run();
    if (s.found_smaller())
        return std::nullopt;
    return s.count();
}

bool is_isotopic(const Array& a, const Array& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols() || a.symbols() != b.symbols())
        return false;
    return canonical(a).array == canonical(b).array;
}

std::vector<TrisotopyClass> trisotopic_classes(std::span<const Array> arrays) {
    std::map<Array, TrisotopyClass> classes;
    for (const Array& a : arrays) {
        if (a.rows() != a.cols())
            throw ParameterError("trisotopism classes need square arrays");
        const CanonicalForm f = canonical(a);
        const CanonicalForm t = canonical(transpose(a));
        TrisotopyClass cls;
        cls.self_transpose = f.array == t.array;
        cls.representative = std::min(f.array, t.array);
        cls.aut_order = cls.self_transpose ? 2 * f.aut_order : f.aut_order;
        classes.emplace(cls.representative, cls);
    }
    std::vector<TrisotopyClass> out;
    out.reserve(classes.size());
    for (auto& [_, cls] : classes)
        out.push_back(std::move(cls));
    return out;
}

}  // namespace rcd
