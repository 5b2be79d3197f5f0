#pragma once

#include "json.hpp"

#include "rcd/design.hpp"
#include "rcd/enumerate.hpp"
#include "rcd/params.hpp"

namespace rcd {

/// {"num": n, "den": d}
nlohmann::json rational_json(const Rational& q);

/// {"v", "r", "c", "rows": [[...], ...]}
nlohmann::json array_json(const Array& a);
Array array_from_json(const nlohmann::json& j);

nlohmann::json params_json(const ParameterSet& p);
nlohmann::json classification_json(const DesignClassification& d);

/// Counts and histograms for every label (zeros included), target and
/// status. Wall time only with `with_timing`, so the default is a pure
/// function of the target.
nlohmann::json report_json(const EnumerationReport& r, bool with_timing = false);

/// Inverse of report_json for the fields it writes (no representatives).
EnumerationReport report_from_json(const nlohmann::json& j);

}  // namespace rcd
