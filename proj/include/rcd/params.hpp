#pragma once

#include <filesystem>
#include <optional>
#include <vector>

#include "rcd/design.hpp"

namespace rcd {

/// Which design types survive the divisibility conditions.
enum class Admissible { none, ao_only, cc_side, rr_side, all };

std::string_view admissible_name(Admissible a);

struct ParameterSet {
    int v = 0, r = 0, c = 0;
    Rational e{0};
    Rational lambda_rr{0};  // average row-row intersection c(e-1)/(r-1)
    Rational lambda_cc{0};  // average column-column intersection r(e-1)/(c-1)
    Rational lambda_rc{0};  // average row-column intersection, always e
    bool in_range = false;  // max(r, c) < v <= rc/2
    Admissible admissible_for = Admissible::none;
    bool forced_rr = false;  // 2c - v equals the average row-row intersection
    bool forced_cc = false;  // 2r - v equals the average column-column intersection
    bool infeasible = false;  // 2c - v or 2r - v exceeds the corresponding average

    /// Divisibility admits this label (ignores the forced-property dashes).
    bool divisibility_admits(Label l) const;
    /// A proper design of this label is excluded because a property it must
    /// lack is forced.
    bool dashed(Label l) const;
    /// Admitted and not dashed.
    bool admits(Label l) const { return divisibility_admits(l) && !dashed(l); }

    std::optional<int> e_int() const;
    std::optional<int> lambda_rr_int() const;
    std::optional<int> lambda_cc_int() const;
};

/// Throws ParameterError unless r, c > 1 and v > 0.
ParameterSet derive(int v, int r, int c);

/// All in-range (v, r, c) with v <= v_max admissible for at least one type,
/// sorted by v, then e, then r x c pairs with r <= c first.
std::vector<ParameterSet> enumerate_admissible(int v_max);

struct BIBDParams {
    int points = 0, blocks = 0, replication = 0, block_size = 0, pair_count = 0;
};

enum class Existence { exists, known_nonexistent, unknown };

std::string_view existence_name(Existence e);

/// Existence lookup keyed by (points, block_size, pair_count). The built-in
/// table lists a few classical designs; complete designs and their multiples
/// are recognized directly.
class BIBDTable {
  public:
    BIBDTable();
    /// Lines of the form "exists|nonexistent points block_size lambda";
    /// '#' starts a comment.
    void load(const std::filesystem::path& file);
    void add(int points, int block_size, int lambda, Existence status);
    Existence lookup(const BIBDParams& p) const;

  private:
    struct Entry {
        int points, block_size, lambda;
        Existence status;
    };
    std::vector<Entry> entries_;
};

struct ComponentBIBDs {
    std::optional<BIBDParams> row;  // BIBD_R, present when lambda_rr is integral
    std::optional<BIBDParams> col;  // BIBD_C, present when lambda_cc is integral
    Existence row_hint = Existence::unknown;
    Existence col_hint = Existence::unknown;
};

ComponentBIBDs component_bibds(const ParameterSet& p, const BIBDTable& table = BIBDTable());

enum class SmallVRelaxation {
    double_triple,  // both averages integral
    cc_side,        // MA / transposed SA side
    rr_side,        // transposed MA / SA side
    ao,             // AO only needs integral e
};

/// Admissible sets with v < r + c - 1 and v <= v_max for the chosen family.
/// Both orientations are reported.
std::vector<ParameterSet> search_small_v(int v_max, SmallVRelaxation relax = SmallVRelaxation::double_triple);

struct PYDParameterSet {
    int v = 0, r = 0, e = 0;
    Rational lambda_bibd{0};
    std::optional<int> series_index;
};

/// v = s_i^2 with s_i = 2i - 1, r = t_i = s_i (s_i - (-1)^(i-1)) / 2.
PYDParameterSet pyd_main_series(int i);

/// All (v, r) with r < v < r^2, v | r^2 and 2e(r-1)/(v-1) integral.
std::vector<PYDParameterSet> pyd_admissible_search(int v_max);

}  // namespace rcd
