#include <gtest/gtest.h>

#include <map>

#include "oracles.hpp"
#include "rcd/design.hpp"

using namespace rcd;

namespace {

Array latin(int n) {
    Array a(n, n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            a.set(i, j, static_cast<Symbol>((i + j) % n));
    return a;
}

bool brute_valid(const Array& a) {
    const int r = a.rows(), c = a.cols(), v = a.symbols();
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j)
            for (int k = j + 1; k < c; ++k)
                if (a.at(i, j) == a.at(i, k))
                    return false;
    for (int j = 0; j < c; ++j)
        for (int i = 0; i < r; ++i)
            for (int k = i + 1; k < r; ++k)
                if (a.at(i, j) == a.at(k, j))
                    return false;
    if ((r * c) % v)
        return false;
    for (int s = 0; s < v; ++s) {
        int n = 0;
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < c; ++j)
                n += a.at(i, j) == s;
        if (n != r * c / v)
            return false;
    }
    return true;
}

}  // namespace

TEST(Validate, LatinRectangle) {
    auto rep = validate(oracle::load("latin_4x3.txt"));
    EXPECT_TRUE(rep.ok());
    EXPECT_EQ(rep.replication, 3);
}

TEST(Validate, SmallExamples) {
    EXPECT_TRUE(validate(Array::from_rows(2, {{0, 1}, {1, 0}})).ok());
    auto bad = validate(Array::from_rows(2, {{0, 0}, {1, 1}}));
    ASSERT_FALSE(bad.ok());
    EXPECT_EQ(bad.violations.front().kind, ViolationKind::repeat_in_row);
    EXPECT_EQ(bad.violations.front().index, 0);
    auto frac = validate(Array::from_rows(3, {{0, 1}, {1, 2}}));
    ASSERT_FALSE(frac.ok());
    EXPECT_EQ(frac.violations.back().kind, ViolationKind::non_equireplicate);
    EXPECT_FALSE(frac.replication.has_value());
    auto range = validate(Array(1, 1, 1, std::vector<Symbol>{3}));
    EXPECT_EQ(range.violations.front().kind, ViolationKind::out_of_range);
}

TEST(Validate, AgreesWithBruteForceOnSmallGrids) {
    for (int r = 1; r <= 3; ++r)
        for (int c = 1; c <= 3; ++c)
            for (int v = 1; v <= 4; ++v) {
                const int n = r * c;
                std::vector<Symbol> cells(n, 0);
                for (;;) {
                    Array a(r, c, v, cells);
                    ASSERT_EQ(validate(a).ok(), brute_valid(a));
                    int k = 0;
                    while (k < n && ++cells[k] == v)
                        cells[k++] = 0;
                    if (k == n)
                        break;
                }
            }
}

TEST(Intersections, LatinRectangle) {
    auto p = intersections(oracle::load("latin_4x3.txt"));
    EXPECT_EQ(p.rr.size(), 6u);
    EXPECT_EQ(p.cc.size(), 3u);
    EXPECT_EQ(p.rc.size(), 12u);
    for (int x : p.rr)
        EXPECT_EQ(x, 2);
    for (int x : p.rc)
        EXPECT_EQ(x, 3);
    EXPECT_EQ(p.mean_rc, Rational(3));
}

TEST(Intersections, LatinSquaresAreConstant) {
    for (int n = 2; n <= 7; ++n) {
        auto p = intersections(latin(n));
        for (const auto* ms : {&p.rr, &p.cc, &p.rc})
            for (int x : *ms)
                EXPECT_EQ(x, n);
    }
}

TEST(Intersections, MeanRowColumnIsReplication) {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 200; ++t) {
        Array a = oracle::random_valid(10, 5, 6, rng);
        EXPECT_EQ(intersections(a).mean_rc, Rational(3));
    }
}

TEST(Classify, LatinRectangleFlags) {
    // The printed 4 x 3 array on 4 symbols has every line property.
    auto d = classify(oracle::load("latin_4x3.txt"));
    EXPECT_EQ(d.rr, 2);
    EXPECT_EQ(d.cc, 4);
    EXPECT_EQ(d.rc, 3);
    EXPECT_EQ(d.label, Label::TA);
}

TEST(Classify, SesquiProductIsProper) {
    Array b = oracle::load("sesqui_4x9.txt");
    auto d = classify(b);
    EXPECT_EQ(d.label, Label::SA);
    EXPECT_EQ(d.rr, 6);
    EXPECT_EQ(d.rc, 3);
    EXPECT_FALSE(d.connected_cols);
    EXPECT_TRUE(d.connected_rows);
    auto t = classify(transpose(b));
    EXPECT_EQ(t.label, Label::SAT);
    EXPECT_EQ(t.cc, d.rr);
}

TEST(Classify, ConnectedSesquiColumnDesign) {
    auto d = classify(oracle::load("sesqui_connected_4x9.txt"));
    EXPECT_EQ(d.label, Label::SA);
    EXPECT_TRUE(d.connected_cols);
}

TEST(Classify, HalfLatinIsProperAO) {
    Array a = oracle::load("half_latin_ao_12x12.txt");
    ASSERT_TRUE(validate(a).ok());
    auto d = classify(a);
    EXPECT_EQ(d.label, Label::AO);
    EXPECT_EQ(d.rc, 6);
    EXPECT_FALSE(d.connected_rows);
    EXPECT_FALSE(d.connected_cols);
}

TEST(Classify, LatinSquareIsTriple) {
    EXPECT_EQ(classify(latin(3)).label, Label::TA);
    EXPECT_TRUE(connectivity(latin(5), Axis::rows));
    EXPECT_TRUE(connectivity(latin(5), Axis::columns));
}

TEST(Classify, LabelTable) {
    EXPECT_EQ(label_for(true, true, true), Label::TA);
    EXPECT_EQ(label_for(true, true, false), Label::DA);
    EXPECT_EQ(label_for(false, true, true), Label::SAT);
    EXPECT_EQ(label_for(true, false, true), Label::SA);
    EXPECT_EQ(label_for(false, true, false), Label::MA);
    EXPECT_EQ(label_for(true, false, false), Label::MAT);
    EXPECT_EQ(label_for(false, false, true), Label::AO);
    EXPECT_EQ(label_for(false, false, false), Label::none);
    for (Label l : all_labels)
        EXPECT_EQ(parse_label(label_name(l)), l);
}

TEST(Classify, TransposeSwapsFlags) {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 100; ++t) {
        Array a = oracle::random_valid(6, 3, 4, rng);
        auto d = classify(a), e = classify(transpose(a));
        EXPECT_EQ(d.rr, e.cc);
        EXPECT_EQ(d.cc, e.rr);
        EXPECT_EQ(d.rc, e.rc);
        EXPECT_EQ(d.connected_rows, e.connected_cols);
    }
}

TEST(Classify, InvariantUnderIsotopism) {
    std::mt19937_64 rng(5);
    for (const char* f : {"latin_4x3.txt", "sesqui_4x9.txt", "half_latin_ao_12x12.txt", "pyd_6x6.txt"}) {
        Array a = oracle::load(f);
        const Label l = classify(a).label;
        for (int t = 0; t < 100; ++t)
            EXPECT_EQ(classify(oracle::random_isotope(a, rng)).label, l);
    }
}
