#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>

#include "rcd/design.hpp"

namespace rcd {

/// Intersection families a design type requires, with their constants.
struct HeuristicTarget {
    Label label = Label::AO;
    std::optional<int> lambda_rr, lambda_cc, lambda_rc;  // set for required families
};

/// Refused when the label's required constants are not integral.
HeuristicTarget heuristic_target(int v, int r, int c, Label label);

/// Sum over required families of |intersection size - constant| over all
/// line pairs (row-row, column-column or row-column).
long long violations(const Array& a, const HeuristicTarget& target);

/// A binary equireplicate r x c array on v symbols chosen by randomized
/// backtracking; nullopt if none turns up within the node budget.
std::optional<Array> random_equireplicate(int v, int r, int c, std::mt19937_64& rng,
                                          std::uint64_t node_budget = 1'000'000);

struct LocalSearchResult {
    bool found = false;
    std::optional<Array> array;
    long long best_violations = -1;  // over all restarts
    int restarts = 0;                // restarts started
    std::uint64_t moves = 0;         // accepted swaps
    bool proper = false;             // found and exactly the target label
    DesignClassification classification;
};

/// First-improvement descent over legal swaps (two cells of one row or one
/// column whose exchange keeps the array binary), restarting from a fresh
/// random array at local minima. Restart t uses seed + t; with jobs > 1 the
/// lowest successful restart index wins, so results do not depend on jobs.
/// max_steps bounds the swap evaluations per restart.
///
/// The observer, when set, sees each restart's initial array and the array
/// after every accepted swap, with its violation count. It is called from
/// worker threads when jobs > 1.
using SearchObserver = std::function<void(int restart, const Array& state, long long violations)>;

LocalSearchResult local_search(int v, int r, int c, Label target, std::uint64_t seed, int max_restarts,
                               std::uint64_t max_steps, int jobs = 1, const SearchObserver& observer = {});

}  // namespace rcd
