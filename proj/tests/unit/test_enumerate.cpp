#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <set>

#include "oracles.hpp"
#include "rcd/canonical.hpp"
#include "rcd/design.hpp"
#include "rcd/enumerate.hpp"
#include "rcd/params.hpp"

using namespace rcd;

namespace {

struct NaiveCounts {
    std::map<Label, std::uint64_t> counts;
    std::map<Label, std::map<std::uint64_t, std::uint64_t>> hist;
};

// Generate every normalized array, reduce to canonical forms.
NaiveCounts naive(int v, int r, int c) {
    std::set<Array> seen;
    oracle::all_normalized(v, r, c, [&](const Array& a) { seen.insert(canonical(a).array); });
    NaiveCounts out;
    for (const Array& a : seen) {
        const Label l = classify(a).label;
        ++out.counts[l];
        ++out.hist[l][canonical(a).aut_order];
    }
    return out;
}

SearchTarget target(int v, int r, int c, SearchMode mode) {
    SearchTarget t;
    t.v = v;
    t.r = r;
    t.c = c;
    t.mode = mode;
    return t;
}

const SearchMode all_modes[] = {SearchMode::constant_columns, SearchMode::constant_rows, SearchMode::constant_lines,
                                SearchMode::adjusted_orthogonal, SearchMode::any};

const Label all_with_none[] = {Label::TA, Label::DA, Label::SAT, Label::SA, Label::MA, Label::MAT, Label::AO, Label::none};

struct Shape {
    int v, r, c;
};

// Small sets where the generate-everything oracle is quick.
const Shape naive_shapes[] = {{2, 2, 2}, {3, 3, 3}, {4, 2, 4}, {4, 4, 2}, {4, 4, 4}, {6, 3, 4},
                              {6, 4, 3}, {6, 2, 3}, {4, 3, 4}, {6, 3, 2}, {8, 4, 4}, {5, 5, 3}};

}  // namespace

TEST(Enumerate, ModesNames) {
    for (auto m : all_modes)
        EXPECT_EQ(parse_mode(mode_name(m)), m);
    EXPECT_FALSE(parse_mode("sideways"));
}

TEST(Enumerate, AgreesWithNaiveOracleInEveryMode) {
    for (const auto& s : naive_shapes) {
        const NaiveCounts ref = naive(s.v, s.r, s.c);
        for (auto mode : all_modes) {
            SearchTarget t = target(s.v, s.r, s.c, mode);
            const EnumerationReport rep = enumerate(t);
            if (rep.status == RunStatus::refused)
                continue;
            ASSERT_EQ(rep.status, RunStatus::complete) << rep.reason;
            for (Label l : all_with_none) {
                const std::uint64_t want = counts_label(t, l) ? (ref.counts.count(l) ? ref.counts.at(l) : 0) : 0;
                if (!counts_label(t, l))
                    continue;
                EXPECT_EQ(rep.count(l), want) << s.v << "," << s.r << "x" << s.c << " " << mode_name(mode) << " "
                                              << label_name(l);
                if (want)
                    EXPECT_EQ(rep.histogram.at(l), ref.hist.at(l)) << label_name(l);
            }
            // Nothing outside the mode's family is reported.
            for (const auto& [l, n] : rep.counts)
                EXPECT_TRUE(counts_label(t, l)) << label_name(l);
        }
    }
}

TEST(Enumerate, RepresentativesAreCanonicalWithCorrectLabels) {
    const EnumerationReport rep = enumerate(target(8, 4, 4, SearchMode::any));
    ASSERT_EQ(rep.status, RunStatus::complete);
    std::uint64_t n = 0;
    for (const auto& [label, list] : rep.representatives) {
        EXPECT_EQ(list.size(), rep.count(label));
        for (const auto& r : list) {
            EXPECT_TRUE(is_canonical(r.array));
            EXPECT_EQ(classify(r.array).label, label);
            EXPECT_EQ(canonical(r.array).aut_order, r.aut_order);
            ++n;
        }
        EXPECT_TRUE(std::is_sorted(list.begin(), list.end(),
                                   [](const Representative& a, const Representative& b) { return a.array < b.array; }));
    }
    EXPECT_EQ(n, rep.total());
    EXPECT_EQ(rep.count(Label::AO), 20u);
}

TEST(Enumerate, SdrOracleGivesIdenticalReports) {
    const Shape shapes[] = {{6, 3, 4}, {6, 4, 3}, {8, 4, 4}, {9, 3, 6}, {10, 4, 5}, {4, 4, 4}};
    for (const auto& s : shapes)
        for (auto mode : all_modes) {
            SearchTarget t = target(s.v, s.r, s.c, mode);
            const auto a = enumerate(t);
            const auto b = enumerate_via_sdr(t);
            ASSERT_EQ(a.status, b.status) << s.v << "," << s.r << "x" << s.c << " " << mode_name(mode);
            EXPECT_EQ(a.counts, b.counts) << s.v << "," << s.r << "x" << s.c << " " << mode_name(mode);
            EXPECT_EQ(a.histogram, b.histogram);
            for (const auto& [l, list] : a.representatives) {
                ASSERT_TRUE(b.representatives.count(l));
                ASSERT_EQ(list.size(), b.representatives.at(l).size());
                for (std::size_t k = 0; k < list.size(); ++k)
                    EXPECT_EQ(list[k].array, b.representatives.at(l)[k].array);
            }
        }
}

TEST(Enumerate, TransposeDuality) {
    const Shape shapes[] = {{6, 3, 4}, {9, 3, 6}, {10, 4, 5}, {8, 4, 4}};
    auto dual = [](Label l) {
        switch (l) {
            case Label::SA: return Label::SAT;
            case Label::SAT: return Label::SA;
            case Label::MA: return Label::MAT;
            case Label::MAT: return Label::MA;
            default: return l;
        }
    };
    for (const auto& s : shapes) {
        const auto a = enumerate(target(s.v, s.r, s.c, SearchMode::any));
        const auto b = enumerate(target(s.v, s.c, s.r, SearchMode::any));
        for (Label l : all_with_none) {
            EXPECT_EQ(a.count(l), b.count(dual(l))) << label_name(l);
            if (a.count(l))
                EXPECT_EQ(a.histogram.at(l), b.histogram.at(dual(l)));
        }
        // The representative lists match class by class after transposing.
        for (const auto& [l, list] : a.representatives) {
            std::set<Array> mine, theirs;
            for (const auto& r : list)
                mine.insert(canonical(transpose(r.array)).array);
            for (const auto& r : b.representatives.at(dual(l)))
                theirs.insert(r.array);
            EXPECT_EQ(mine, theirs);
        }
    }
}

TEST(Enumerate, ConstantRowsModeIsTransposedColumnsMode) {
    auto rows = enumerate(target(6, 3, 4, SearchMode::constant_rows));
    auto cols = enumerate(target(6, 4, 3, SearchMode::constant_columns));
    EXPECT_EQ(rows.count(Label::MAT), cols.count(Label::MA));
    EXPECT_EQ(rows.count(Label::SA), cols.count(Label::SAT));
    EXPECT_EQ(rows.count(Label::DA), cols.count(Label::DA));
    EXPECT_EQ(rows.count(Label::MAT), 3u);
}

TEST(Enumerate, RequirementsRestrictButDoNotChangeCounts) {
    SearchTarget t = target(10, 4, 5, SearchMode::constant_columns);
    const auto free = enumerate(t);
    t.require_rc = true;
    const auto req = enumerate(t);
    EXPECT_EQ(req.count(Label::SAT), free.count(Label::SAT));
    EXPECT_EQ(req.count(Label::MA), 0u);
    EXPECT_TRUE(counts_label(t, Label::SAT));
    EXPECT_FALSE(counts_label(t, Label::MA));
}

TEST(Enumerate, InadmissibleTargetsAreRefused) {
    auto rep = enumerate(target(7, 3, 4, SearchMode::any));
    EXPECT_EQ(rep.status, RunStatus::refused);
    EXPECT_FALSE(rep.reason.empty());
    EXPECT_EQ(rep.total(), 0u);
    rep = enumerate(target(8, 4, 6, SearchMode::constant_columns));  // r(e-1)/(c-1) = 8/5
    EXPECT_EQ(rep.status, RunStatus::refused);
    rep = enumerate(target(4, 2, 6, SearchMode::any));  // c > v
    EXPECT_EQ(rep.status, RunStatus::refused);
    EXPECT_FALSE(inadmissibility_reason(target(6, 3, 4, SearchMode::constant_rows)).size());
}

TEST(Enumerate, ForcedRunsOnInadmissibleSetsFindNothing) {
    // Integral e but a fractional intersection average for the mode's family,
    // so the search runs and must come back empty.
    struct Control {
        int v, r, c;
        SearchMode mode;
    };
    const auto cc = SearchMode::constant_columns, rr = SearchMode::constant_rows;
    const Control controls[] = {{4, 2, 4, cc}, {5, 2, 5, cc},  {5, 3, 5, cc},  {6, 2, 6, cc}, {6, 3, 6, cc},
                                {6, 4, 6, cc}, {8, 4, 4, cc},  {8, 4, 6, cc},  {9, 3, 6, cc}, {12, 4, 6, cc},
                                {10, 5, 4, cc}, {8, 4, 4, rr}, {10, 4, 5, rr}, {4, 4, 2, rr}, {5, 5, 3, rr},
                                {6, 6, 3, rr}, {6, 6, 4, rr},  {8, 6, 4, rr},  {9, 6, 3, rr}, {12, 6, 4, rr}};
    for (const auto& k : controls) {
        SearchTarget t = target(k.v, k.r, k.c, k.mode);
        ASSERT_EQ(derive(k.v, k.r, k.c).e.denominator(), 1);
        ASSERT_FALSE(inadmissibility_reason(t).empty());
        EXPECT_EQ(enumerate(t).status, RunStatus::refused);
        t.force = true;
        const auto rep = enumerate(t);
        EXPECT_EQ(rep.status, RunStatus::complete);
        EXPECT_GT(rep.stats.nodes, 0u);
        EXPECT_EQ(rep.total(), 0u) << k.v << "," << k.r << "x" << k.c << " " << mode_name(k.mode);
    }
}

TEST(Enumerate, NodeBudgetStopsTheRun) {
    SearchTarget t = target(10, 4, 5, SearchMode::any);
    t.node_budget = 20;
    const auto rep = enumerate(t);
    EXPECT_EQ(rep.status, RunStatus::budget_exceeded);
    EXPECT_FALSE(rep.reason.empty());
}

TEST(Enumerate, ResultsDoNotDependOnJobs) {
    SearchTarget t = target(9, 3, 6, SearchMode::constant_rows);
    const auto one = enumerate(t);
    t.jobs = 4;
    const auto four = enumerate(t);
    EXPECT_EQ(one.counts, four.counts);
    EXPECT_EQ(one.histogram, four.histogram);
    EXPECT_EQ(one.stats.nodes, four.stats.nodes);
    for (const auto& [l, list] : one.representatives)
        for (std::size_t k = 0; k < list.size(); ++k)
            EXPECT_EQ(list[k].array, four.representatives.at(l)[k].array);
}

TEST(Enumerate, CheckpointResumesAfterBudgetAndTornLine) {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "rcd_ckpt_test";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const fs::path file = dir / "run.ckpt";

    SearchTarget t = target(10, 4, 5, SearchMode::any);
    const auto fresh = enumerate(t);

    t.checkpoint = file;
    t.node_budget = 150;
    const auto partial = enumerate(t);
    EXPECT_EQ(partial.status, RunStatus::budget_exceeded);
    ASSERT_TRUE(fs::exists(file));
    {
        std::ofstream out(file, std::ios::app);
        out << "{\"pass\":0,\"unit\":";  // interrupted write
    }
    t.node_budget = 0;
    const auto resumed = enumerate(t);
    ASSERT_EQ(resumed.status, RunStatus::complete);
    EXPECT_EQ(resumed.counts, fresh.counts);
    EXPECT_EQ(resumed.histogram, fresh.histogram);
    for (const auto& [l, list] : fresh.representatives)
        for (std::size_t k = 0; k < list.size(); ++k)
            EXPECT_EQ(list[k].array, resumed.representatives.at(l)[k].array);

    // A complete checkpoint answers without searching.
    const auto cached = enumerate(t);
    EXPECT_EQ(cached.counts, fresh.counts);

    // A checkpoint for another target is rejected.
    SearchTarget other = target(6, 3, 4, SearchMode::any);
    other.checkpoint = file;
    EXPECT_THROW(enumerate(other), Error);
    fs::remove_all(dir);
}

TEST(Enumerate, HistogramAccessor) {
    const auto rep = enumerate(target(8, 4, 4, SearchMode::adjusted_orthogonal));
    const std::map<std::uint64_t, std::uint64_t> want = {{2, 1}, {4, 4}, {8, 7}, {16, 5}, {32, 2}, {64, 1}};
    EXPECT_EQ(autotopism_histogram(rep).at(Label::AO), want);
}
