#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rcd/design.hpp"

namespace rcd {

/// sum(coef * var) REL rhs over 0/1 variables numbered from 1.
struct PBConstraint {
    enum class Rel { ge, eq };
    std::vector<std::pair<int, int>> terms;  // (coefficient, variable)
    Rel rel = Rel::ge;
    long long rhs = 0;
};

/// Named block of consecutive variables, for the sidecar map.
struct VariableBlock {
    std::string name;     // "x", "y_rr", ...
    std::string meaning;  // how the index decomposes
    int first = 0;
    int count = 0;
};

struct PBModel {
    int v = 0, r = 0, c = 0;
    Label label = Label::none;
    bool proper = true;
    bool symmetry_breaking = true;
    int num_vars = 0;
    std::vector<PBConstraint> constraints;
    std::vector<VariableBlock> blocks;

    /// Variable for "cell (i, j) holds symbol s".
    int x(int i, int j, int s) const { return 1 + (i * c + j) * v + s; }
};

/// One-hot cells, row/column binarity, replication e, intersection
/// equalities for the label's constant families and, for proper targets,
/// at least one deviating line pair per family that must not be constant.
/// With symmetry breaking the first column is fixed to 0..r-1.
/// Refused when divisibility rules the label out.
PBModel build_model(int v, int r, int c, Label label, bool proper = true, bool symmetry_breaking = true);

std::string to_opb(const PBModel& m);

struct CNFFormula {
    int num_vars = 0;  // model variables keep their numbers; auxiliaries follow
    std::vector<std::vector<int>> clauses;
};

/// Clausal form: each linear constraint is normalized to positive
/// coefficients, literals are repeated by weight and a totalizer counts
/// them up to the bound.
CNFFormula to_cnf_formula(const PBModel& m);
std::string to_dimacs(const CNFFormula& f, const PBModel& m);

/// Variable map and metadata (JSON text).
std::string sidecar_json(const PBModel& m, const std::string& format, int total_vars);

struct OPBCheck {
    bool ok = false;
    int variables = 0;
    int constraints = 0;
    std::string message;
};

/// Syntax and header check for linear OPB text.
OPBCheck validate_opb(const std::string& text);

/// Assignment (index 0 unused) of an array: x from cells, auxiliaries
/// derived. Returns nullopt when the array cannot satisfy the model.
std::optional<std::vector<bool>> encode(const PBModel& m, const Array& a);
bool satisfies(const PBModel& m, const std::vector<bool>& assignment);
Array decode(const PBModel& m, const std::vector<bool>& assignment);

enum class SolveStatus { sat, unsat, budget_exceeded };
std::string_view solve_status_name(SolveStatus s);

struct SolveResult {
    SolveStatus status = SolveStatus::budget_exceeded;
    std::vector<bool> assignment;
    std::optional<Array> array;  // decoded when sat
    std::uint64_t nodes = 0;     // decisions
};

/// Complete DPLL search with bound propagation over the linear
/// constraints (clauses are the >= 1 case). For tiny instances only.
SolveResult naive_solve(const PBModel& m, std::uint64_t node_budget = 10'000'000);

}  // namespace rcd
