// Orderly column-by-column generation engine behind enumerate().
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "rcd/array.hpp"

namespace rcd::detail {

struct EngineConfig {
    int v = 0, r = 0, c = 0;
    bool cc_exact = false;
    std::optional<int> lambda_cc;  // unset: fixed by the first column pair
    bool rr_bounded = false;
    int lambda_rr = 0;
    bool rc_bounded = false;
    int lambda_rc = 0;
};

class ColumnEngine {
  public:
    using Leaf = std::function<void(const Array&, std::uint64_t aut)>;
    using Prefix = std::function<void(const std::vector<Symbol>& cells)>;

    explicit ColumnEngine(const EngineConfig& cfg);

    /// Canonical feasible arrays with `depth` columns, in generation order.
    void frontier(int depth, const Prefix& visit);

    /// Completes the canonical prefix (column-major cells of some number of
    /// columns) and reports every canonical complete array below it.
    void complete(const std::vector<Symbol>& prefix, const Leaf& leaf);

    std::uint64_t nodes() const { return nodes_; }
    std::uint64_t candidates() const { return candidates_; }

    /// Checked between nodes; returning true aborts the search.
    std::function<bool()> should_stop;

  private:
    bool place(int i, Symbol s);  // false when a cap is exceeded; applied regardless
    void unplace(int i, Symbol s);
    void begin_column();
    bool column_bounds_hold() const;
    bool passes_shift_filter() const;
    void commit();
    void uncommit();
    bool tick();
    void extend(int depth, const Prefix* prefix_visit, const Leaf* leaf);
    void fill(int i, int depth, const Prefix* prefix_visit, const Leaf* leaf);
    void finish_column(int depth, const Prefix* prefix_visit, const Leaf* leaf);
    void reset();

    EngineConfig cfg_;
    int R_, K_, V_, E_;
    std::optional<int> lam_cc_;

    int k_ = 0;  // columns placed
    std::vector<Symbol> cells_;
    std::vector<std::uint64_t> rowmask_;   // symbols per row
    std::vector<std::uint64_t> colmask_;   // symbols per column
    std::vector<std::uint64_t> symrows_;   // rows per symbol
    std::vector<std::uint64_t> symcols_;   // columns per symbol
    std::vector<int> count_;
    std::vector<int> labels_after_;        // number of labels used after k columns
    std::vector<int> rr_;                  // R x R
    std::vector<int> rc_;                  // R x K

    std::vector<int> meet_;                // per depth: |column k ∩ column j|
    std::vector<std::uint64_t> forced_;    // per depth: symbols column k must hold
    int next_label_ = 0;
    bool aborted_ = false;

    std::uint64_t nodes_ = 0;
    std::uint64_t candidates_ = 0;
};

}  // namespace rcd::detail
