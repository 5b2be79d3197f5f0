// Shared normal form for the CNF encoder and the naive solver.
#pragma once

#include <vector>

#include "rcd/satgen.hpp"

namespace rcd::detail {

struct WeightedLit {
    int lit;  // DIMACS style: +var or -var
    long long weight;
};

/// sum(weight * lit) >= bound with positive weights.
struct NormConstraint {
    std::vector<WeightedLit> lits;
    long long bound;
};

/// Equalities become two inequalities; negative coefficients move to the
/// negated literal.
inline std::vector<NormConstraint> normalize(const PBConstraint& k) {
    auto ge = [](const std::vector<std::pair<int, int>>& terms, long long rhs, int sign) {
        NormConstraint n{{}, rhs * sign};
        for (auto [coef, var] : terms) {
            const long long a = static_cast<long long>(coef) * sign;
            if (a > 0) {
                n.lits.push_back({var, a});
            } else if (a < 0) {
                n.lits.push_back({-var, -a});
                n.bound -= a;
            }
        }
        return n;
    };
    std::vector<NormConstraint> out{ge(k.terms, k.rhs, 1)};
    if (k.rel == PBConstraint::Rel::eq)
        out.push_back(ge(k.terms, k.rhs, -1));
    return out;
}

}  // namespace rcd::detail
