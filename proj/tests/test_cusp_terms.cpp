#include <gtest/gtest.h>

#include "tracekit/cusp_terms.hpp"

using namespace tracekit;

namespace {

// width of the cusp x/y (lowest terms) of Gamma0(N)
i64 width_of(i64 y, i64 N) { return N / gcd64(mod(y * y, N) == 0 ? N : y * y, N); }

// sum over upper-triangular coset representatives of Gamma0(N)\Delta_n of a/d at the cusp p/r
Rational ratio_sum(i64 N, i64 n, i64 p, i64 r)
{
    const i64 wa = width_of(r, N);
    Rational s = 0;
    for (i64 a : divisors(n)) {
        if (gcd64(a, N) != 1) continue;
        const i64 d = n / a;
        for (i64 b = 0; b < d; ++b) {
            // first column of sigma C, C = (p *; r *)
            const i64 x = a * p + b * r, y = d * r;
            const i64 g = gcd64(std::abs(x), std::abs(y));
            s += make_rational(g * g, n) * make_rational(wa, width_of(y / g, N));
        }
    }
    return s;
}

i64 coset_count(i64 N, i64 n)
{
    i64 c = 0;
    for (i64 a : divisors(n))
        if (gcd64(a, N) == 1) c += n / a;
    return c;
}

} // namespace

TEST(CuspReps, CountAndWidths)
{
    for (i64 N = 1; N <= 40; ++N) {
        i64 want = 0, wsum = 0;
        for (i64 r : divisors(N)) want += euler_phi(gcd64(r, N / r));
        const auto& reps = cusp_reps(N);
        EXPECT_EQ(static_cast<i64>(reps.size()), want);
        EXPECT_EQ(cusp_count(N), want);
        for (auto& c : reps) {
            EXPECT_EQ(c.C.det(), 1);
            EXPECT_EQ(c.r * c.s, N);
            EXPECT_EQ(c.width, width_of(to_i64(c.C.c), N));
            wsum += c.width;
        }
        // widths add up to the index
        EXPECT_EQ(wsum, index_phi1(N));
    }
}

TEST(PhiChi, Examples)
{
    for (i64 a = 1; a <= 6; ++a)
        for (i64 d = 1; d <= 6; ++d) EXPECT_EQ(phi_chi(1, trivial_character(1), a, d), CycloNum(1L));
    EXPECT_EQ(phi_chi(4, trivial_character(4), 1, 1), CycloNum(3L));
    EXPECT_EQ(phi_chi(6, trivial_character(6), 2, 3), CycloNum(1L));
}

TEST(PhiEll, Examples)
{
    EXPECT_EQ(phi_ell(6, 1, 2, 3), 1);
    for (i64 N = 1; N <= 12; ++N)
        for (i64 a = 1; a <= 8; ++a)
            for (i64 d = 1; d <= 8; ++d) EXPECT_EQ(CycloNum(phi_ell(N, 1, a, d)), phi_chi(N, trivial_character(N), a, d));
    EXPECT_EQ(phi_ell(6, 2, 1, 2), 0); // 2 does not divide a + d
    EXPECT_EQ(phi_ell(2, 2, 2, 2), Rational(1, 2));
    EXPECT_THROW(phi_ell(4, 2, 2, 2), invalid_input);
    EXPECT_THROW(phi_ell(6, 4, 2, 2), invalid_input);
}

TEST(PhiGeneric, MatchesClosedFormsAndIsSymmetric)
{
    EXPECT_EQ(phi_generic(4, trivial_character(4), 1, 1), CycloNum(3L));
    EXPECT_EQ(phi_generic(6, trivial_character(6), 2, 3), CycloNum(1L));
    for (i64 N = 1; N <= 12; ++N)
        for (auto& chi : enumerate_characters(N))
            for (i64 a = 1; a <= 6; ++a)
                for (i64 d = 1; d <= 6; ++d) {
                    CycloNum g = phi_generic(N, chi, a, d);
                    ASSERT_EQ(g, phi_chi(N, chi, a, d)) << chi.label() << " a=" << a << " d=" << d;
                    ASSERT_EQ(g, phi_generic(N, chi, d, a));
                    ASSERT_EQ(phi_chi(N, chi, a, d), phi_chi(N, chi, d, a));
                }
}

TEST(PhiGeneric, AtkinLehnerCase)
{
    for (i64 N = 1; N <= 12; ++N)
        for (i64 ell : divisors(N)) {
            if (gcd64(ell, N / ell) != 1) continue;
            for (i64 m = 1; m * ell <= 24; ++m)
                for (i64 a : divisors(m * ell)) {
                    const i64 d = m * ell / a;
                    ASSERT_EQ(phi_generic_ell(N, ell, a, d), phi_ell(N, ell, a, d)) << N << " " << ell << " " << a << " " << d;
                    ASSERT_EQ(phi_ell(N, ell, a, d), phi_ell(N, ell, d, a));
                }
        }
}

TEST(EisensteinTrace, Examples)
{
    auto one4 = trivial_character(4);
    for (int k = 4; k <= 12; k += 2) EXPECT_EQ(eisenstein_trace(4, one4, k, 1), CycloNum(3L));
    EXPECT_EQ(eisenstein_trace(4, one4, 2, 1), CycloNum(2L));
    EXPECT_EQ(eisenstein_trace(1, trivial_character(1), 12, 2), CycloNum(2049L));
    EXPECT_EQ(coboundary_trace(1, trivial_character(1), 12, 2), CycloNum(2049L));
    EXPECT_EQ(coboundary_trace(1, trivial_character(1), 2, 1), CycloNum(0L));
    // wrong parity
    EXPECT_TRUE(eisenstein_trace(4, enumerate_characters(4)[1], 4, 1).is_zero());
}

TEST(EisensteinTrace, EqualsCoboundaryTrace)
{
    for (i64 N = 1; N <= 12; ++N)
        for (auto& chi : enumerate_characters(N))
            for (int k = 2; k <= 12; ++k)
                for (i64 n = 1; n <= 10; ++n)
                    ASSERT_EQ(eisenstein_trace(N, chi, k, n), coboundary_trace(N, chi, k, n)) << chi.label() << " k=" << k << " n=" << n;
    for (i64 N = 1; N <= 12; ++N)
        for (i64 ell : divisors(N)) {
            if (gcd64(ell, N / ell) != 1) continue;
            for (int k = 2; k <= 12; k += 2)
                for (i64 n = 1; n <= 6; ++n) ASSERT_EQ(eisenstein_trace_ell(N, ell, k, n), coboundary_trace_ell(N, ell, k, n));
        }
}

TEST(EisensteinTrace, WeightTwoDimension)
{
    for (i64 N = 1; N <= 20; ++N) EXPECT_EQ(eisenstein_trace(N, trivial_character(N), 2, 1), CycloNum(cusp_count(N) - 1)) << N;
}

TEST(CuspRatioSum, EqualsCosetCountForCoprimeIndex)
{
    for (i64 N = 1; N <= 8; ++N)
        for (i64 n = 1; n <= 6; ++n) {
            if (gcd64(n, N) != 1) continue;
            for (auto& c : cusp_reps(N))
                EXPECT_EQ(ratio_sum(N, n, to_i64(c.C.a), to_i64(c.C.c)), coset_count(N, n)) << "N=" << N << " n=" << n << " r=" << c.r;
        }
}

TEST(CuspRatioSum, DependsOnCuspWhenIndexSharesAFactor)
{
    // Gamma0(2), n = 2: two cosets, but the ratio sum is 1 at infinity and 3 at 0
    EXPECT_EQ(coset_count(2, 2), 2);
    EXPECT_EQ(ratio_sum(2, 2, 1, 0), 1);
    EXPECT_EQ(ratio_sum(2, 2, 0, 1), 3);
}
