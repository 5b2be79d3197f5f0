#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <numeric>
#include <tuple>

#include "rcd/params.hpp"
#include "admissibility_skeleton.hpp"

using namespace rcd;
using admissibility::cell;
using admissibility::columns;
using admissibility::skeleton;

TEST(Derive, TenFiveSix) {
    ParameterSet p = derive(10, 5, 6);
    EXPECT_EQ(p.e, Rational(3));
    EXPECT_EQ(p.lambda_rr, Rational(3));
    EXPECT_EQ(p.lambda_cc, Rational(2));
    EXPECT_EQ(p.lambda_rc, Rational(3));
    EXPECT_EQ(p.admissible_for, Admissible::all);
    EXPECT_TRUE(p.in_range);
}

TEST(Derive, ForcedPropertiesExcludeAO) {
    ParameterSet p = derive(6, 4, 3);
    EXPECT_TRUE(p.forced_cc);
    EXPECT_FALSE(p.admits(Label::AO));
    EXPECT_TRUE(p.admits(Label::DA));
}

TEST(Derive, NonIntegralReplication) {
    ParameterSet p = derive(7, 3, 3);
    EXPECT_EQ(p.admissible_for, Admissible::none);
    for (Label l : all_labels)
        EXPECT_FALSE(p.admits(l));
}

TEST(Derive, RejectsDegenerateShapes) {
    EXPECT_THROW(derive(6, 1, 4), ParameterError);
    EXPECT_THROW(derive(6, 4, 1), ParameterError);
}

TEST(Derive, ProperAOExclusionLists) {
    for (auto [v, r, c] : {std::tuple{6, 4, 3}, {8, 6, 4}, {9, 6, 3}, {10, 8, 5}, {12, 8, 3}, {12, 9, 4}, {12, 10, 6},
                           {14, 12, 7}}) {
        EXPECT_TRUE(derive(v, r, c).dashed(Label::AO)) << v << " " << r << " " << c;
        EXPECT_TRUE(derive(v, c, r).dashed(Label::AO));
    }
    for (auto [v, r, c] : {std::tuple{6, 3, 4}, {12, 4, 9}}) {
        EXPECT_TRUE(derive(v, r, c).dashed(Label::MA));
        EXPECT_TRUE(derive(v, r, c).dashed(Label::SAT));
    }
}

TEST(EnumerateAdmissible, SkeletonToFourteen) {
    auto sets = enumerate_admissible(14);
    ASSERT_EQ(sets.size(), std::size(skeleton));
    for (std::size_t k = 0; k < sets.size(); ++k) {
        const auto& p = sets[k];
        const auto& row = skeleton[k];
        EXPECT_EQ(p.v, row.v);
        EXPECT_EQ(p.e, Rational(row.e));
        EXPECT_EQ(p.r, row.r);
        EXPECT_EQ(p.c, row.c);
        std::string got;
        for (Label l : columns)
            got += cell(p, l);
        EXPECT_EQ(got, row.cells) << p.v << ":" << p.r << "x" << p.c;
    }
}

TEST(EnumerateAdmissible, SmallBounds) {
    EXPECT_TRUE(enumerate_admissible(5).empty());
    auto six = enumerate_admissible(6);
    ASSERT_EQ(six.size(), 2u);
    EXPECT_EQ(six[0].r, 3);
    EXPECT_EQ(six[1].r, 4);
}

TEST(EnumerateAdmissible, AgreesWithNaiveDivisibility) {
    auto sets = enumerate_admissible(100);
    std::vector<std::tuple<int, int, int>> naive;
    for (int v = 1; v <= 100; ++v)
        for (int r = 2; r < v; ++r)
            for (int c = 2; c < v; ++c) {
                if (r * c < 2 * v || (r * c) % v)
                    continue;
                const int e = r * c / v;
                // Any two lines share at least 2c - v (resp. 2r - v) symbols.
                if ((2 * c - v) * (r - 1) > c * (e - 1) || (2 * r - v) * (c - 1) > r * (e - 1))
                    continue;
                naive.emplace_back(v, r, c);
            }
    std::sort(naive.begin(), naive.end());
    std::vector<std::tuple<int, int, int>> got;
    for (const auto& p : sets)
        got.emplace_back(p.v, p.r, p.c);
    std::sort(got.begin(), got.end());
    EXPECT_EQ(got, naive);
}

TEST(Derive, ForcedEqualsReplicationPlusOne) {
    for (const auto& p : enumerate_admissible(1000)) {
        const int e = *p.e_int();
        if (p.r <= e)
            EXPECT_EQ(p.forced_rr, p.r == e + 1);
        if (p.c <= e)
            EXPECT_EQ(p.forced_cc, p.c == e + 1);
    }
}

TEST(ComponentBIBDs, KnownCases) {
    auto t = component_bibds(derive(21, 7, 15));
    ASSERT_TRUE(t.col.has_value());
    const BIBDParams col = *t.col;
    EXPECT_EQ(std::tie(col.points, col.blocks, col.replication, col.block_size, col.pair_count),
              std::make_tuple(15, 21, 7, 5, 2));
    EXPECT_EQ(t.col_hint, Existence::known_nonexistent);

    auto d = component_bibds(derive(10, 5, 6));
    ASSERT_TRUE(d.row.has_value());
    const BIBDParams row = *d.row;
    EXPECT_EQ(std::tie(row.points, row.blocks, row.replication, row.block_size, row.pair_count),
              std::make_tuple(5, 10, 6, 3, 3));

    auto s = component_bibds(derive(6, 3, 4));
    EXPECT_EQ(s.row_hint, Existence::exists);
    EXPECT_EQ(s.col_hint, Existence::exists);

    for (auto [v, r, c] : {std::tuple{21, 14, 15}, {28, 8, 21}, {28, 20, 21}})
        EXPECT_EQ(component_bibds(derive(v, r, c)).col_hint, Existence::known_nonexistent) << v << r << c;
}

TEST(BIBDTable, BundledDataFile) {
    BIBDTable t;
    t.load(RCD_DATA_DIR "/bibd.txt");
    auto params = [](int v, int k, int l) {
        BIBDParams b;
        b.points = v;
        b.block_size = k;
        b.pair_count = l;
        b.replication = l * (v - 1) / (k - 1);
        b.blocks = v * b.replication / k;
        return b;
    };
    EXPECT_EQ(t.lookup(params(43, 7, 1)), Existence::known_nonexistent);
    EXPECT_EQ(t.lookup(params(13, 3, 1)), Existence::exists);
    EXPECT_EQ(t.lookup(params(13, 3, 2)), Existence::exists);
    EXPECT_EQ(t.lookup(params(22, 7, 2)), Existence::known_nonexistent);
    EXPECT_EQ(BIBDTable().lookup(params(13, 3, 1)), Existence::unknown);
}

TEST(ComponentBIBDs, DoubleCounts) {
    for (const auto& p : enumerate_admissible(60)) {
        auto b = component_bibds(p);
        for (const auto& x : {b.row, b.col}) {
            if (!x)
                continue;
            EXPECT_EQ(x->points * x->replication, x->blocks * x->block_size);
            EXPECT_EQ(x->pair_count * (x->points - 1), x->replication * (x->block_size - 1));
        }
    }
}

TEST(SearchSmallV, EmptyForDoubleAndTriple) { EXPECT_TRUE(search_small_v(1000).empty()); }

TEST(SearchSmallV, Relaxations) {
    auto has = [](const std::vector<ParameterSet>& xs, int v, int r, int c) {
        return std::any_of(xs.begin(), xs.end(), [&](const ParameterSet& p) { return p.v == v && p.r == r && p.c == c; });
    };
    EXPECT_TRUE(has(search_small_v(14, SmallVRelaxation::cc_side), 8, 6, 4));
    EXPECT_TRUE(has(search_small_v(14, SmallVRelaxation::rr_side), 8, 4, 6));
    EXPECT_TRUE(has(search_small_v(14, SmallVRelaxation::ao), 9, 6, 6));
}

TEST(PYD, MainSeries) {
    auto p2 = pyd_main_series(2);
    EXPECT_EQ(p2.v, 9);
    EXPECT_EQ(p2.r, 6);
    EXPECT_EQ(p2.e, 4);
    EXPECT_EQ(p2.lambda_bibd, Rational(5));
    auto p4 = pyd_main_series(4);
    EXPECT_EQ(p4.v, 49);
    EXPECT_EQ(p4.r, 28);
    for (int i = 2; i <= 40; ++i) {
        auto p = pyd_main_series(i);
        const std::int64_t want = i % 2 == 0 ? i * (2 * i + 1) / 2 : (i - 1) * (2 * i - 3) / 2;
        EXPECT_EQ(p.lambda_bibd, Rational(want)) << i;
    }
    EXPECT_THROW(pyd_main_series(1), ParameterError);
}

TEST(PYD, AdmissibleSearch) {
    auto xs = pyd_admissible_search(100);
    auto has = [&](int v, int r) {
        return std::any_of(xs.begin(), xs.end(), [&](const PYDParameterSet& p) { return p.v == v && p.r == r; });
    };
    EXPECT_TRUE(has(9, 6));
    EXPECT_TRUE(has(25, 10));
}

TEST(PYD, FirstSquareWithTwoSides) {
    auto xs = pyd_admissible_search(300);
    std::map<int, std::vector<int>> by_v;
    for (const auto& p : xs)
        by_v[p.v].push_back(p.r);
    int first = 0;
    for (auto& [v, rs] : by_v)
        if (rs.size() >= 2) {
            first = v;
            break;
        }
    EXPECT_EQ(first, 289);
    EXPECT_EQ(by_v[289], (std::vector<int>{136, 204}));
}
