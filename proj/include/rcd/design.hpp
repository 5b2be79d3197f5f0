#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <boost/rational.hpp>

#include "rcd/array.hpp"

namespace rcd {

using Rational = boost::rational<std::int64_t>;

enum class ViolationKind { repeat_in_row, repeat_in_column, non_equireplicate, out_of_range };

struct Violation {
    ViolationKind kind;
    int index;  // row, column or symbol depending on kind
    std::string message;
};

struct ValidationReport {
    std::vector<Violation> violations;
    std::optional<int> replication;  // e when rc/v is integral
    bool ok() const noexcept { return violations.empty(); }
};

/// Checks binarity and equireplication.
ValidationReport validate(const Array& a);

struct IntersectionProfile {
    std::vector<int> rr;  // sorted, C(r,2) entries
    std::vector<int> cc;  // sorted, C(c,2) entries
    std::vector<int> rc;  // sorted, r*c entries
    Rational mean_rr{0};
    Rational mean_cc{0};
    Rational mean_rc{0};
};

IntersectionProfile intersections(const Array& a);

enum class Label { TA, DA, SA, SAT, MA, MAT, AO, none };

std::string_view label_name(Label l);
std::optional<Label> parse_label(std::string_view s);

/// All labels except none, in reporting order.
inline constexpr Label all_labels[] = {Label::TA, Label::DA, Label::SAT, Label::SA,
                                       Label::MA, Label::MAT, Label::AO};

/// Maps property flags to the label of the proper design they describe.
Label label_for(bool rr, bool cc, bool rc);

struct DesignClassification {
    std::optional<int> rr;  // constant row-row intersection, if any
    std::optional<int> cc;
    std::optional<int> rc;
    Label label = Label::none;
    bool connected_rows = false;
    bool connected_cols = false;
};

/// A multiset with no entries (r = 1 or c = 1) counts as constant.
DesignClassification classify(const Array& a);

enum class Axis { rows, columns };

/// Connectivity of the bipartite graph between lines of the axis and symbols.
bool connectivity(const Array& a, Axis axis);

}  // namespace rcd
