#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rcd/design.hpp"

namespace rcd {

enum class SearchMode {
    constant_columns,    // CC held exactly during the search
    constant_rows,       // RR, searched on the transpose
    constant_lines,      // union of the two: every type with RR or CC
    adjusted_orthogonal, // RC bounds during the search, exact at the end
    any,                 // no intersection requirement
};

std::string_view mode_name(SearchMode m);
std::optional<SearchMode> parse_mode(std::string_view s);

struct SearchTarget {
    int v = 0, r = 0, c = 0;
    SearchMode mode = SearchMode::constant_columns;
    // Extra families that must be constant; they add pruning.
    bool require_rr = false;
    bool require_cc = false;
    bool require_rc = false;
    /// Stop after this many accepted partial arrays (0 = no limit).
    std::uint64_t node_budget = 0;
    int jobs = 1;
    /// Completed work units are appended here and skipped on restart.
    std::optional<std::filesystem::path> checkpoint;
    /// Run even when divisibility rules the target out (negative controls).
    bool force = false;
    /// Keep class representatives (counts and histograms are always kept).
    bool keep_representatives = true;
};

enum class RunStatus { complete, refused, budget_exceeded };

std::string_view status_name(RunStatus s);

struct SearchStats {
    std::uint64_t nodes = 0;       // accepted (canonical, feasible) partial arrays
    std::uint64_t candidates = 0;  // complete candidate columns examined
    std::uint64_t units = 0;       // work units at the split depth
    double wall_seconds = 0;       // not part of the deterministic report
};

struct Representative {
    Array array;
    std::uint64_t aut_order = 0;
};

struct EnumerationReport {
    SearchTarget target;
    RunStatus status = RunStatus::complete;
    std::string reason;
    std::map<Label, std::uint64_t> counts;
    std::map<Label, std::vector<Representative>> representatives;  // sorted by array
    std::map<Label, std::map<std::uint64_t, std::uint64_t>> histogram;
    SearchStats stats;

    std::uint64_t total() const;
    std::uint64_t count(Label l) const;
};

/// Complete enumeration of isotopism classes by orderly column-by-column
/// generation.
EnumerationReport enumerate(const SearchTarget& target);

/// Independent generator: unordered block designs (columns as blocks) up to
/// isomorphism, each ordered into rows by successive systems of distinct
/// representatives, then reduced by canonical forms. Small instances only.
EnumerationReport enumerate_via_sdr(const SearchTarget& target, std::uint64_t array_budget = 50'000'000);

/// Histogram of autotopism orders per label (as stored in the report).
std::map<Label, std::map<std::uint64_t, std::uint64_t>> autotopism_histogram(const EnumerationReport& report);

/// True when a complete run of this target counts every class of label l:
/// l has all the properties the mode and the extra requirements demand.
bool counts_label(const SearchTarget& target, Label l);

/// Why the target is ruled out for its mode, or empty when admissible.
std::string inadmissibility_reason(const SearchTarget& target);

}  // namespace rcd
