#include <gtest/gtest.h>

#include "oracles.hpp"
#include "rcd/array.hpp"
#include "rcd/io.hpp"

using namespace rcd;

TEST(Array, FromRowsAndAccess) {
    Array a = Array::from_rows(3, {{0, 1, 2}, {1, 2, 0}});
    EXPECT_EQ(a.rows(), 2);
    EXPECT_EQ(a.cols(), 3);
    EXPECT_EQ(a.at(1, 2), 0);
    const auto col = a.column(1);
    EXPECT_EQ(col[0], 1);
    EXPECT_EQ(col[1], 2);
}

TEST(Array, RaggedRowsAreStructuralErrors) {
    EXPECT_THROW(Array::from_rows(3, {{0, 1, 2}, {1, 2}}), StructuralError);
    EXPECT_THROW(Array(2, 2, 2, std::vector<Symbol>{0, 1, 1}), StructuralError);
}

TEST(Array, TransposeInvolution) {
    std::mt19937_64 rng(7);
    for (int t = 0; t < 20; ++t) {
        Array a = oracle::random_valid(10, 5, 6, rng);
        Array tt = transpose(a);
        EXPECT_EQ(tt.rows(), 6);
        EXPECT_EQ(tt.cols(), 5);
        EXPECT_EQ(transpose(tt), a);
    }
}

TEST(Array, OrderingIsColumnMajor) {
    Array a = Array::from_rows(2, {{0, 1}, {1, 0}});
    Array b = Array::from_rows(2, {{1, 0}, {0, 1}});
    EXPECT_LT(a, b);
}

TEST(Array, FirstOccurrenceRelabel) {
    Array a = Array::from_rows(3, {{2, 0}, {1, 2}});
    Array n = relabel_first_occurrence(a);
    EXPECT_EQ(n, Array::from_rows(3, {{0, 2}, {1, 0}}));
}

TEST(Io, RoundTrip) {
    Array a = Array::from_rows(4, {{3, 0, 1}, {2, 3, 0}, {1, 2, 3}, {0, 1, 2}});
    const std::string text = format_array(a);
    EXPECT_EQ(text, "4 4 3\n3 0 1\n2 3 0\n1 2 3\n0 1 2\n");
    EXPECT_EQ(parse_single(text).array, a);
}

TEST(Io, ListWithBlankSeparators) {
    std::vector<Array> xs{Array::from_rows(2, {{0, 1}, {1, 0}}), Array::from_rows(2, {{1, 0}, {0, 1}})};
    const std::string text = format_list(xs);
    EXPECT_EQ(text, "2 2 2\n0 1\n1 0\n\n2 2 2\n1 0\n0 1\n");
    auto back = parse_list(text);
    ASSERT_EQ(back.size(), 2u);
    EXPECT_EQ(back[0].array, xs[0]);
    EXPECT_EQ(back[1].array, xs[1]);
}

TEST(Io, SymbolTableLabels) {
    Array half = oracle::load("half_latin_ao_12x12.txt");
    EXPECT_EQ(half.rows(), 12);
    EXPECT_EQ(half.symbols(), 24);
    EXPECT_EQ(half.at(0, 0), 12);  // 1' is the 13th label
    EXPECT_EQ(half.at(0, 6), 6);
}

TEST(Io, YoudenTag) {
    auto p = parse_single("3 2 3 YR\n0 1 2\n1 2 0\n");
    EXPECT_TRUE(p.youden);
    EXPECT_EQ(format_array(p.array, true).substr(0, 9), "3 2 3 YR\n");
}

TEST(Io, MalformedInput) {
    EXPECT_THROW(parse_single("2 2 2\n0 1\n"), StructuralError);
    EXPECT_THROW(parse_single("2 2 2\n0 1 0\n1 0\n"), StructuralError);
    EXPECT_THROW(parse_single("2 2 2\n0 5\n1 0\n"), StructuralError);
    EXPECT_THROW(parse_single("2 2\n0 1\n1 0\n"), StructuralError);
    EXPECT_THROW(parse_single("2 2 2\n#symbols a\na a\na a\n"), StructuralError);
    EXPECT_THROW(parse_single("2 2 2\n0 1\n1 0\n1 1\n"), StructuralError);
}
