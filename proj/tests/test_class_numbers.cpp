#include <gtest/gtest.h>

#include <sstream>

#include "tracekit/class_numbers.hpp"

using namespace tracekit;

TEST(HurwitzH, Examples)
{
    EXPECT_EQ(hurwitz_H(0), Rational(-1, 12));
    EXPECT_EQ(hurwitz_H(-4), -1);
    EXPECT_EQ(hurwitz_H(-9), Rational(-3, 2));
    EXPECT_EQ(hurwitz_H(-5), 0);
    EXPECT_EQ(hurwitz_H(3), Rational(1, 3));
    EXPECT_EQ(hurwitz_H(4), Rational(1, 2));
    EXPECT_EQ(hurwitz_H(23), 3);
    EXPECT_EQ(hurwitz_H(12), Rational(4, 3));
    EXPECT_EQ(hurwitz_H(1), 0);
    EXPECT_EQ(hurwitz_H(2), 0);
}

TEST(H0, Examples)
{
    EXPECT_EQ(h0(0), Rational(-1, 12));
    EXPECT_EQ(h0(4), Rational(-1, 2));
    EXPECT_EQ(h0(9), -1);
    EXPECT_EQ(h0(-3), Rational(1, 3));
    EXPECT_EQ(h0(-4), Rational(1, 2));
    EXPECT_EQ(h0(-12), 1);
    EXPECT_EQ(h0(-23), 3);
    EXPECT_EQ(h0(5), 0);
    EXPECT_EQ(h0(-5), 0);
}

namespace {

// H as a function of the discriminant
Rational Hd(i64 D) { return hurwitz_H(-D); }

} // namespace

TEST(Inversion, HFromH0AndBack)
{
    for (i64 D = -10000; D <= 10000; ++D) {
        Rational s1 = 0, s2 = 0;
        if (D == 0) {
            s1 = h0(0);
            s2 = Hd(0);
        } else {
            for (i64 d = 1; d * d <= std::abs(D); ++d) {
                if (D % (d * d) != 0) continue;
                s1 += h0(D / (d * d));
                s2 += Hd(D / (d * d)) * moebius(d);
            }
        }
        ASSERT_EQ(Hd(D), s1) << D;
        ASSERT_EQ(h0(D), s2) << D;
    }
}

TEST(KroneckerHurwitz, ClassNumberRelation)
{
    for (i64 n = 1; n <= 200; ++n) {
        Rational s = 0;
        // t^2 - 4n = u^2 bounds |t| by n + 1
        for (i64 t = -(n + 1); t <= n + 1; ++t) s += hurwitz_H(4 * n - t * t);
        EXPECT_EQ(s, Rational(sigma1(n))) << n;
    }
}

TEST(LevelFourRelation, HOfFourD)
{
    for (i64 D = 0; D <= 1000; ++D) {
        if (D % 4 == 1 || D % 4 == 2) continue;
        Rational rhs = hurwitz_H(4 * D) + hurwitz_H(D) * kronecker(-D, 2);
        if (D % 4 == 0) rhs += 2 * hurwitz_H(D / 4);
        EXPECT_EQ(3 * hurwitz_H(D), rhs) << D;
    }
}

TEST(Cache, MatchesRecomputationAndRoundTrips)
{
    auto& cache = ClassNumberCache::instance();
    for (i64 D = -50; D <= 200; ++D) {
        hurwitz_H(D);
        h0(D);
    }
    std::stringstream ss;
    cache.save_csv(ss);
    const std::string saved = ss.str();
    cache.clear();
    std::stringstream in(saved);
    cache.load_csv(in);
    for (i64 D = -50; D <= 200; ++D) {
        Rational v;
        ASSERT_TRUE(cache.lookup(ClassNumberKind::H, D, v));
        EXPECT_EQ(v, detail::hurwitz_H_uncached(D));
        ASSERT_TRUE(cache.lookup(ClassNumberKind::h0, D, v));
        EXPECT_EQ(v, detail::h0_uncached(D));
    }
    std::stringstream again;
    cache.save_csv(again);
    EXPECT_EQ(again.str(), saved);
}

TEST(Cache, RejectsMalformedRows)
{
    std::stringstream bad("kind,D,num,den\nQ,3,1,3\n");
    EXPECT_THROW(ClassNumberCache::instance().load_csv(bad), invalid_input);
}
