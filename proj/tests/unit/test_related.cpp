#include <gtest/gtest.h>

#include "oracles.hpp"
#include "rcd/canonical.hpp"
#include "rcd/constructions.hpp"
#include "rcd/design.hpp"
#include "rcd/enumerate.hpp"
#include "rcd/related.hpp"

using namespace rcd;

namespace {

// Youden rectangles through the block-design generator, a search path
// independent of the one enumerate_youden uses.
std::set<Array> youden_via_sdr(int n, int k) {
    SearchTarget t;
    t.v = n;
    t.r = k;
    t.c = n;
    t.mode = SearchMode::constant_columns;
    std::set<Array> out;
    for (const auto& [l, list] : enumerate_via_sdr(t).representatives)
        for (const auto& r : list)
            if (is_youden_rectangle(r.array))
                out.insert(r.array);
    return out;
}

}  // namespace

TEST(Youden, EnumerationMatchesIndependentGenerator) {
    for (auto [n, k] : {std::pair{7, 3}, {7, 4}, {4, 3}, {5, 4}}) {
        const auto list = enumerate_youden(n, k);
        const std::set<Array> got(list.begin(), list.end());
        EXPECT_EQ(got.size(), list.size());
        EXPECT_EQ(got, youden_via_sdr(n, k)) << n << "," << k;
        EXPECT_FALSE(list.empty());
        for (const auto& y : list)
            EXPECT_TRUE(is_youden_rectangle(y));
    }
}

TEST(Youden, FractionalLambdaGivesNothing) { EXPECT_TRUE(enumerate_youden(6, 3).empty()); }

TEST(Youden, TooLargeIsRefused) {
    EXPECT_THROW(enumerate_youden(13, 4), Refused);
    EXPECT_THROW(youden_coverage(13, 4, Label::DA), Refused);
}

TEST(Youden, TransformGivesMonoArrays) {
    for (auto [n, k] : {std::pair{7, 3}, {7, 4}}) {
        const int lambda = k * (k - 1) / (n - 1);
        for (const auto& y : enumerate_youden(n, k))
            for (int j = 0; j < n; ++j) {
                const Array m = youden_to_mono(y, j);
                EXPECT_EQ(m.rows(), k);
                EXPECT_EQ(m.cols(), n - k);
                EXPECT_EQ(m.symbols(), n - 1);
                const auto val = validate(m);
                ASSERT_TRUE(val.ok());
                EXPECT_EQ(*val.replication, k - lambda);
                const auto d = classify(m);
                ASSERT_TRUE(d.cc.has_value());
                EXPECT_EQ(*d.cc, lambda);
            }
    }
    EXPECT_THROW(youden_to_mono(oracle::load("half_latin_ao_12x12.txt"), 0), Refused);
}

TEST(Youden, CoverageSmallRows) {
    auto cov = youden_coverage(7, 3, Label::DA);
    EXPECT_EQ(cov.hit, 1u);
    EXPECT_EQ(cov.total, 2u);
    cov = youden_coverage(7, 3, Label::TA);
    EXPECT_EQ(cov.hit, 0u);
    EXPECT_EQ(cov.total, 0u);
    cov = youden_coverage(7, 3, Label::SAT);
    EXPECT_EQ(cov.hit, 0u);
    EXPECT_EQ(cov.total, 0u);
    cov = youden_coverage(7, 4, Label::DA);
    EXPECT_EQ(cov.hit, 2u);
    EXPECT_EQ(cov.total, 2u);
    cov = youden_coverage(7, 4, Label::SAT);
    EXPECT_EQ(cov.hit, 1u);
    EXPECT_EQ(cov.total, 2u);
}

TEST(Pyd, Predicate) {
    EXPECT_TRUE(is_pyd(oracle::load("pyd_6x6.txt")));
    EXPECT_TRUE(is_pyd(cyclic_latin_square(6)));
    EXPECT_FALSE(is_pyd(half_latin_ao(3)));
    EXPECT_THROW(is_pyd(latin_rectangle(4, 3, 4)), Refused);
}

TEST(Pyd, SquareArraysWithAConstantFamilyAreProperAo) {
    SearchTarget t;
    t.v = 8;
    t.r = 4;
    t.c = 4;
    t.mode = SearchMode::any;
    const auto rep = enumerate(t);
    for (const auto& [l, n] : rep.counts)
        EXPECT_TRUE(l == Label::AO || l == Label::none) << label_name(l);
    std::uint64_t pyds = 0;
    for (const auto& r : rep.representatives.at(Label::AO))
        pyds += is_pyd(r.array);
    EXPECT_LT(pyds, rep.count(Label::AO));
}
