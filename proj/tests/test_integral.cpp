#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "st/integral.hpp"

namespace st {
namespace {

TEST(Integral, TwoByTwoPrefixSums)
{
    const GrayImage img(2, 2, {1, 2, 3, 4});
    const IntegralImage ii = build_integral(img);
    EXPECT_EQ(ii.sums(2, 2), 10.0);
    EXPECT_EQ(ii.sums(1, 1), 1.0);
    EXPECT_EQ(ii.sums(1, 2), 3.0);
    EXPECT_EQ(ii.sums(2, 1), 4.0);
}

TEST(Integral, AllOnesCountsPixels)
{
    const GrayImage img(7, 5, 1.0);
    const IntegralImage ii(img);
    for (int r = 0; r <= 5; ++r)
        for (int c = 0; c <= 7; ++c) EXPECT_EQ(ii.sums(r, c), double(r * c));
}

TEST(Integral, MatchesDirectSummation)
{
    std::mt19937_64 rng(11);
    const GrayImage img = oracle::random_image(rng, 64, 64);
    const IntegralImage ii(img);
    for (int r = 0; r <= 64; ++r)
        for (int c = 0; c <= 64; ++c) {
            const double expect = (r == 0 || c == 0) ? 0.0 : oracle::direct_sum(img, 0, 0, r - 1, c - 1);
            ASSERT_EQ(ii.sums(r, c), expect) << r << "," << c;
        }
}

TEST(Integral, TableInvariants)
{
    std::mt19937_64 rng(5);
    const GrayImage img = oracle::random_image(rng, 23, 17);
    const IntegralImage ii(img);
    for (int c = 0; c <= 23; ++c) EXPECT_EQ(ii.sums(0, c), 0.0);
    for (int r = 0; r <= 17; ++r) EXPECT_EQ(ii.sums(r, 0), 0.0);
    for (int r = 1; r <= 17; ++r)
        for (int c = 1; c <= 23; ++c) {
            EXPECT_GE(ii.sums(r, c), ii.sums(r - 1, c));
            EXPECT_GE(ii.sums(r, c), ii.sums(r, c - 1));
        }
    EXPECT_EQ(ii.total(), oracle::direct_sum(img, 0, 0, 16, 22));
}

TEST(Integral, BoxSumFullImageAndSinglePixel)
{
    std::mt19937_64 rng(3);
    const GrayImage img = oracle::random_image(rng, 9, 6);
    const IntegralImage ii(img);
    EXPECT_EQ(ii.box_sum(0, 0, 5, 8), ii.total());
    for (int r = 0; r < 6; ++r)
        for (int c = 0; c < 9; ++c) EXPECT_EQ(ii.box_sum(r, c, r, c), img(r, c));
}

TEST(Integral, BoxSumRandomRectangles)
{
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        const GrayImage img = oracle::random_image(rng, 32, 32);
        const IntegralImage ii(img);
        std::uniform_int_distribution<int> pos(0, 31);
        for (int k = 0; k < 50; ++k) {
            int r0 = pos(rng), r1 = pos(rng), c0 = pos(rng), c1 = pos(rng);
            if (r0 > r1) std::swap(r0, r1);
            if (c0 > c1) std::swap(c0, c1);
            ASSERT_EQ(ii.box_sum(r0, c0, r1, c1), oracle::direct_sum(img, r0, c0, r1, c1));
        }
    }
}

TEST(Integral, BoxSumAdditivity)
{
    std::mt19937_64 rng(21);
    const GrayImage img = oracle::random_image(rng, 40, 30);
    const IntegralImage ii(img);
    std::uniform_int_distribution<int> rpos(0, 29), cpos(0, 39);
    for (int k = 0; k < 200; ++k) {
        int r0 = rpos(rng), r1 = rpos(rng), c0 = cpos(rng), c1 = cpos(rng);
        if (r0 > r1) std::swap(r0, r1);
        if (c0 > c1) std::swap(c0, c1);
        if (r1 > r0) {
            const int m = (r0 + r1) / 2;
            EXPECT_EQ(ii.box_sum(r0, c0, m, c1) + ii.box_sum(m + 1, c0, r1, c1),
                      ii.box_sum(r0, c0, r1, c1));
        }
        if (c1 > c0) {
            const int m = (c0 + c1) / 2;
            EXPECT_EQ(ii.box_sum(r0, c0, r1, m) + ii.box_sum(r0, m + 1, r1, c1),
                      ii.box_sum(r0, c0, r1, c1));
        }
    }
}

TEST(Integral, BoxSumRejectsBadRectangles)
{
    const IntegralImage ii(GrayImage(4, 3, 1.0));
    EXPECT_THROW(ii.box_sum(-1, 0, 1, 1), ContractViolation);
    EXPECT_THROW(ii.box_sum(0, 0, 3, 1), ContractViolation);
    EXPECT_THROW(ii.box_sum(0, 0, 1, 4), ContractViolation);
    EXPECT_THROW(ii.box_sum(2, 0, 1, 1), ContractViolation);
}

TEST(Integral, BoxMeanConstantAndHandValue)
{
    const IntegralImage seven(GrayImage(15, 11, 7.0));
    for (int d = 0; d <= 5; ++d)
        for (int r = d; r < 11 - d; ++r)
            for (int c = d; c < 15 - d; ++c) EXPECT_EQ(seven.box_mean(r, c, d), 7.0);

    const IntegralImage ramp(GrayImage(3, 3, {0, 1, 2, 3, 4, 5, 6, 7, 8}));
    EXPECT_EQ(ramp.box_mean(1, 1, 1), 4.0);
}

TEST(Integral, BoxMeanMatchesDirectMean)
{
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 30; ++trial) {
        const GrayImage img = oracle::random_image(rng, 40, 33);
        const IntegralImage ii(img);
        for (int k = 0; k < 40; ++k) {
            const int d = std::uniform_int_distribution<int>(0, 16)(rng);
            const int r = std::uniform_int_distribution<int>(d, 32 - d)(rng);
            const int c = std::uniform_int_distribution<int>(d, 39 - d)(rng);
            const double expect = oracle::direct_mean(img, r, c, d);
            EXPECT_NEAR(ii.box_mean(r, c, d), expect, 1e-9 * std::max(1.0, std::abs(expect)));
        }
    }
}

TEST(Integral, BoxMeanRejectsWindowOutsideImage)
{
    const IntegralImage ii(GrayImage(10, 10, 1.0));
    EXPECT_THROW(ii.box_mean(2, 5, 3), ContractViolation);
    EXPECT_THROW(ii.box_mean(5, 8, 2), ContractViolation);
    EXPECT_NO_THROW(ii.box_mean(3, 3, 3));
}

// A 1-based formulation keeps an unpadded 1-based cumulative sum s and reads
// the window around 1-based (r, c) as s(r-D,c-D) - s(r-D,c+d) - s(r+d,c-D) + s(r+d,c+d)
// with D = d + 1. The padded table must give the same value.
TEST(Integral, AgreesWithUnpaddedCornerFormula)
{
    std::mt19937_64 rng(31);
    const int nr = 30, nc = 26;
    const GrayImage img = oracle::random_image(rng, nc, nr);
    std::vector<double> s(static_cast<std::size_t>(nr) * nc);
    auto S = [&](int r, int c) -> double& { return s[(r - 1) * nc + (c - 1)]; };  // 1-based
    for (int r = 1; r <= nr; ++r)
        for (int c = 1; c <= nc; ++c)
            S(r, c) = img(r - 1, c - 1) + (r > 1 ? S(r - 1, c) : 0) + (c > 1 ? S(r, c - 1) : 0) -
                      (r > 1 && c > 1 ? S(r - 1, c - 1) : 0);

    const IntegralImage ii(img);
    for (int d = 1; d <= 6; ++d) {
        const int D = d + 1;
        const double nx = (2.0 * d + 1) * (2.0 * d + 1);
        for (int r = D + 1; r <= nr - d; ++r)
            for (int c = D + 1; c <= nc - d; ++c) {
                const double v = (S(r - D, c - D) - S(r - D, c + d) - S(r + d, c - D) + S(r + d, c + d)) / nx;
                ASSERT_EQ(ii.box_mean(r - 1, c - 1, d), v);
            }
    }
}

TEST(GrayImage, RejectsOutOfRangeValues)
{
    EXPECT_THROW(GrayImage(2, 1, {0.0, 256.0}), ContractViolation);
    EXPECT_THROW(GrayImage(2, 1, {-1.0, 3.0}), ContractViolation);
    EXPECT_THROW(GrayImage(1, 1, {std::nan("")}), ContractViolation);
    EXPECT_THROW(GrayImage(2, 2, {1.0, 2.0, 3.0}), ContractViolation);
    EXPECT_THROW(GrayImage(0, 2, 0.0), ContractViolation);
}

} // namespace
} // namespace st
