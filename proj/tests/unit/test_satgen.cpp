#include <gtest/gtest.h>

#include "rcd/design.hpp"
#include "rcd/enumerate.hpp"
#include "rcd/satgen.hpp"

using namespace rcd;

namespace {

EnumerationReport all_classes(int v, int r, int c) {
    SearchTarget t;
    t.v = v;
    t.r = r;
    t.c = c;
    t.mode = SearchMode::any;
    return enumerate(t);
}

// The clausal form as a model of ">= 1" constraints, so the same solver checks it.
PBModel clauses_as_model(const CNFFormula& f, const PBModel& like) {
    PBModel m = like;
    m.num_vars = f.num_vars;
    m.constraints.clear();
    for (const auto& cl : f.clauses) {
        PBConstraint k;
        k.rel = PBConstraint::Rel::ge;
        k.rhs = 1;
        for (int lit : cl) {
            if (lit > 0) {
                k.terms.push_back({1, lit});
            } else {
                k.terms.push_back({-1, -lit});
                k.rhs -= 1;
            }
        }
        m.constraints.push_back(std::move(k));
    }
    return m;
}

}  // namespace

TEST(SatModel, RefusesInadmissibleTargets) {
    EXPECT_THROW(build_model(7, 3, 4, Label::AO), Refused);
    EXPECT_THROW(build_model(8, 4, 6, Label::MA), Refused);
}

TEST(SatModel, EncodeRoundTripsEveryClass) {
    for (auto [v, r, c] : {std::tuple{6, 3, 4}, {6, 4, 3}, {8, 4, 4}}) {
        const auto rep = all_classes(v, r, c);
        for (const auto& [label, list] : rep.representatives) {
            if (label == Label::none)
                continue;
            const PBModel m = build_model(v, r, c, label);
            for (const auto& x : list) {
                const auto asg = encode(m, x.array);
                ASSERT_TRUE(asg.has_value()) << label_name(label);
                EXPECT_TRUE(satisfies(m, *asg));
                EXPECT_EQ(decode(m, *asg), x.array);
            }
            // Arrays of other labels do not satisfy a proper model.
            for (const auto& [other, others] : rep.representatives) {
                if (other == label)
                    continue;
                for (const auto& x : others) {
                    const auto asg = encode(m, x.array);
                    EXPECT_TRUE(!asg || !satisfies(m, *asg));
                }
            }
        }
    }
}

TEST(SatModel, ImproperModelAcceptsStrongerDesigns) {
    // A triple array also satisfies the improper sesqui model.
    const auto rep = all_classes(4, 4, 3);
    ASSERT_TRUE(rep.representatives.count(Label::TA));
    const PBModel m = build_model(4, 4, 3, Label::SA, false);
    const auto asg = encode(m, rep.representatives.at(Label::TA)[0].array);
    ASSERT_TRUE(asg.has_value());
    EXPECT_TRUE(satisfies(m, *asg));
}

TEST(SatSolve, AgreesWithEnumerationOnSmallSets) {
    for (auto [v, r, c] : {std::tuple{6, 3, 4}, {6, 4, 3}}) {
        const auto rep = all_classes(v, r, c);
        for (Label l : all_labels) {
            PBModel m;
            try {
                m = build_model(v, r, c, l);
            } catch (const Refused&) {
                EXPECT_EQ(rep.count(l), 0u);
                continue;
            }
            const SolveResult res = naive_solve(m);
            ASSERT_NE(res.status, SolveStatus::budget_exceeded);
            EXPECT_EQ(res.status == SolveStatus::sat, rep.count(l) > 0) << label_name(l);
            if (res.array) {
                EXPECT_TRUE(validate(*res.array).ok());
                EXPECT_EQ(classify(*res.array).label, l);
                EXPECT_TRUE(satisfies(m, res.assignment));
            }
        }
    }
}

TEST(SatSolve, TriviallyUnsat) {
    PBModel m;
    m.num_vars = 2;
    m.constraints.push_back({{{1, 1}, {1, 2}}, PBConstraint::Rel::ge, 3});
    EXPECT_EQ(naive_solve(m).status, SolveStatus::unsat);
    PBModel e;
    e.num_vars = 1;
    e.constraints.push_back({{{1, 1}}, PBConstraint::Rel::eq, 1});
    e.constraints.push_back({{{-1, 1}}, PBConstraint::Rel::ge, 0});
    EXPECT_EQ(naive_solve(e).status, SolveStatus::unsat);
}

TEST(SatSolve, BudgetIsReported) {
    const PBModel m = build_model(10, 4, 5, Label::MA, true, false);
    EXPECT_EQ(naive_solve(m, 3).status, SolveStatus::budget_exceeded);
}

TEST(Cnf, ClausalFormHasTheSameAnswers) {
    for (Label l : {Label::DA, Label::TA, Label::SA}) {
        const PBModel m = build_model(6, 3, 4, l);
        const CNFFormula f = to_cnf_formula(m);
        EXPECT_GE(f.num_vars, m.num_vars);
        const SolveResult pb = naive_solve(m);
        const SolveResult cnf = naive_solve(clauses_as_model(f, m));
        ASSERT_NE(cnf.status, SolveStatus::budget_exceeded);
        EXPECT_EQ(pb.status, cnf.status) << label_name(l);
        if (cnf.status == SolveStatus::sat) {
            std::vector<bool> x(cnf.assignment.begin(), cnf.assignment.begin() + m.num_vars + 1);
            EXPECT_TRUE(satisfies(m, x));
            EXPECT_EQ(classify(decode(m, x)).label, l);
        }
    }
}

TEST(Formats, OpbHeaderAndValidation) {
    const PBModel m = build_model(10, 5, 6, Label::SAT);
    const std::string text = to_opb(m);
    EXPECT_EQ(text.rfind("* #variable= " + std::to_string(m.num_vars) + " #constraint= " +
                             std::to_string(m.constraints.size()),
                         0),
              0u);
    const OPBCheck ok = validate_opb(text);
    EXPECT_TRUE(ok.ok) << ok.message;
    EXPECT_EQ(ok.variables, m.num_vars);
    EXPECT_EQ(ok.constraints, static_cast<int>(m.constraints.size()));

    std::string broken = text;
    broken.replace(broken.find(" ;"), 2, "");
    EXPECT_FALSE(validate_opb(broken).ok);
    EXPECT_FALSE(validate_opb("+1 x1 >= 1 ;\n").ok);
}

TEST(Formats, DimacsHeader) {
    const PBModel m = build_model(6, 3, 4, Label::MAT);
    const CNFFormula f = to_cnf_formula(m);
    const std::string text = to_dimacs(f, m);
    const std::string header = "p cnf " + std::to_string(f.num_vars) + " " + std::to_string(f.clauses.size());
    EXPECT_NE(text.find(header), std::string::npos);
    std::size_t zeros = 0;
    for (std::size_t p = text.find(" 0\n"); p != std::string::npos; p = text.find(" 0\n", p + 1))
        ++zeros;
    EXPECT_EQ(zeros, f.clauses.size());
}

TEST(Formats, SidecarNamesEveryBlock) {
    const PBModel m = build_model(6, 3, 4, Label::SA);
    const std::string j = sidecar_json(m, "opb", m.num_vars);
    for (const auto& b : m.blocks)
        EXPECT_NE(j.find("\"" + b.name + "\""), std::string::npos);
    int covered = 0;
    for (const auto& b : m.blocks)
        covered += b.count;
    EXPECT_EQ(covered, m.num_vars);
}
