#include <gtest/gtest.h>

#include "tracekit/period_oracle.hpp"
#include "tracekit/trace_formulas.hpp"

using namespace tracekit;

namespace {

// q prod (1 - q^m)^24, coefficients 0..M
std::vector<Int> delta_series(int M)
{
    std::vector<Int> c(M + 1, 0);
    c[1] = 1;
    for (int m = 1; m <= M; ++m)
        for (int r = 0; r < 24; ++r)
            for (int j = M; j >= m; --j) c[j] -= c[j - m];
    return c;
}

// dim M_k(1), dim S_k(1)
int dim_M1(int k)
{
    if (k % 2 || k < 0) return 0;
    if (k == 2) return 0;
    return k / 12 + (k % 12 == 2 ? 0 : 1);
}
int dim_S1(int k) { return k >= 12 && k % 2 == 0 ? dim_M1(k) - 1 : 0; }

CycloNum num(long x) { return CycloNum(x); }

} // namespace

TEST(HeckeCusp, LevelOneWeight12)
{
    auto chi = trivial_character(1);
    auto r = trace_hecke_cusp(1, chi, 12, 1);
    EXPECT_EQ(r.value, num(1));
    EXPECT_EQ(r.elliptic, CycloNum(Rational(3, 2)));
    EXPECT_EQ(r.cusp, CycloNum(Rational(-1, 2)));
    EXPECT_TRUE(r.correction.is_zero());
    auto tau = delta_series(30);
    for (i64 n = 1; n <= 30; ++n) EXPECT_EQ(trace_hecke_cusp(1, chi, 12, n).value, CycloNum(tau[n])) << n;
    EXPECT_EQ(trace_hecke_cusp(1, chi, 12, 2).value, num(-24));
    // tau(4) = tau(2)^2 - 2^11
    EXPECT_EQ(tau[4], tau[2] * tau[2] - 2048);
}

TEST(HeckeCusp, ParityViolationIsZero)
{
    auto r = trace_hecke_cusp(4, enumerate_characters(4)[1], 4, 3);
    EXPECT_FALSE(r.parity_ok);
    EXPECT_TRUE(r.value.is_zero());
    EXPECT_TRUE(trace_hecke_cusp(1, trivial_character(1), 13, 1).value.is_zero());
}

TEST(HeckeCusp, BadQueriesThrow)
{
    EXPECT_THROW(trace_hecke_cusp(0, trivial_character(1), 12, 1), invalid_input);
    EXPECT_THROW(trace_hecke_cusp(1, trivial_character(1), 1, 1), invalid_input);
    EXPECT_THROW(trace_hecke_cusp(1, trivial_character(1), 12, 0), invalid_input);
    EXPECT_THROW(trace_hecke_cusp(4, trivial_character(2), 12, 1), invalid_input);
}

TEST(HeckeCusp, TrivialCharacterGivesIntegers)
{
    for (i64 N = 1; N <= 12; ++N)
        for (int k = 2; k <= 12; k += 2)
            for (i64 n = 1; n <= 10; ++n) {
                CycloNum v = trace_hecke_cusp(N, trivial_character(N), k, n).value;
                ASSERT_TRUE(v.is_rational());
                ASSERT_EQ(v.rational_value().get_den(), 1) << N << " " << k << " " << n;
            }
}

TEST(HeckeCusp, FoldedLoopMatchesTwoSided)
{
    for (i64 N = 1; N <= 10; ++N)
        for (auto& chi : enumerate_characters(N))
            for (int k = 2; k <= 7; ++k)
                for (i64 n = 1; n <= 6; ++n) {
                    ASSERT_EQ(trace_hecke_cusp(N, chi, k, n, true).value, trace_hecke_cusp(N, chi, k, n, false).value);
                    ASSERT_EQ(trace_hecke_full(N, chi, k, n, FullVariant::H, true),
                              trace_hecke_full(N, chi, k, n, FullVariant::H, false));
                }
}

TEST(HeckeFull, Examples)
{
    auto chi = trivial_character(1);
    EXPECT_EQ(trace_hecke_full(1, chi, 12, 1), num(3));
    EXPECT_EQ(trace_hecke_full(1, chi, 12, 2), num(2001));
}

TEST(HeckeFull, VariantsAgreeAndDecompose)
{
    // tr on M_k + S_k = 2 tr(S_k) + tr(E_k)
    for (i64 N = 1; N <= 12; ++N)
        for (auto& chi : enumerate_characters(N))
            for (int k = 2; k <= 10; ++k)
                for (i64 n = 1; n <= 8; ++n) {
                    CycloNum f = trace_hecke_full(N, chi, k, n, FullVariant::H);
                    ASSERT_EQ(f, trace_hecke_full(N, chi, k, n, FullVariant::h0)) << chi.label() << " k=" << k << " n=" << n;
                    CycloNum c = trace_hecke_cusp(N, chi, k, n).value;
                    ASSERT_EQ(f, c + c + eisenstein_trace(N, chi, k, n)) << chi.label() << " k=" << k << " n=" << n;
                }
}

TEST(Series, LevelOneDimensions)
{
    auto s = trace_series(1, trivial_character(1), 1, 24);
    ASSERT_EQ(s.size(), 23u);
    for (int k = 2; k <= 24; ++k) EXPECT_EQ(s[k - 2], num(dim_M1(k) + dim_S1(k))) << k;
    auto s2 = trace_series(1, trivial_character(1), 2, 12);
    EXPECT_EQ(s2.back(), num(2001));
    auto odd = trace_series(4, enumerate_characters(4)[1], 3, 8);
    for (int k = 2; k <= 8; k += 2) EXPECT_TRUE(odd[k - 2].is_zero());
    EXPECT_THROW(trace_series(1, trivial_character(1), 1, 1), invalid_input);
}

TEST(ScalarTerm, ClosedFormEqualsSlice)
{
    EXPECT_TRUE(scalar_term(1, trivial_character(1), 12, 2).is_zero());
    EXPECT_EQ(scalar_term(1, trivial_character(1), 12, 1), CycloNum(Rational(11, 12)));
    for (i64 N = 1; N <= 12; ++N)
        for (auto& chi : enumerate_characters(N))
            for (int k = 2; k <= 12; ++k)
                for (i64 n : {1, 4, 9}) ASSERT_EQ(scalar_term(N, chi, k, n), scalar_slice(N, chi, k, n)) << chi.label() << " " << k << " " << n;
}

TEST(AtkinLehner, Examples)
{
    for (i64 N = 1; N <= 12; ++N)
        for (int k = 2; k <= 10; k += 2)
            for (i64 n = 1; n <= 6; ++n)
                EXPECT_EQ(CycloNum(trace_atkin_lehner(N, 1, k, n).value), trace_hecke_cusp(N, trivial_character(N), k, n).value);
    auto r = trace_atkin_lehner(4, 1, 2, 1);
    EXPECT_EQ(r.value, 0);
    // cusp part -1/2 * Phi(1,1) = -3/2, elliptic part 1/2, correction 1
    EXPECT_EQ(r.elliptic, Rational(1, 2));
    EXPECT_EQ(r.cusp, Rational(-3, 2));
    EXPECT_EQ(r.correction, 1);
    EXPECT_THROW(trace_atkin_lehner(4, 2, 4, 1), invalid_input);
    EXPECT_THROW(trace_atkin_lehner(6, 2, 3, 1), invalid_input);
}

TEST(AtkinLehner, LevelSixAgainstPeriodSpace)
{
    // unnormalized full trace = 2 ell^(w/2) (cusp trace) + Eisenstein part
    for (int k : {2, 4, 6}) {
        const int w = k - 2;
        Rational full = trace_atkin_lehner_full(6, 2, k, 1);
        CycloNum oracle = trace_on_W(6, trivial_character(6), w, SigmaDesc::atkin_lehner(1, 2));
        EXPECT_EQ(CycloNum(full), oracle) << k;
        Rational scale = Rational(ipow(Int(2), w / 2));
        EXPECT_EQ(full, 2 * scale * trace_atkin_lehner(6, 2, k, 1).value + eisenstein_trace_ell(6, 2, k, 1)) << k;
    }
}

TEST(Cohen, LevelFour)
{
    EXPECT_EQ(cohen_gamma04(2, 1), 0);
    for (i64 n = 1; n <= 50; n += 2) EXPECT_EQ(cohen_gamma04(2, n), 0) << n;
    for (int k = 2; k <= 12; k += 2)
        for (i64 n = 1; n <= 50; n += 2)
            EXPECT_EQ(CycloNum(cohen_gamma04(k, n)), trace_hecke_cusp(4, trivial_character(4), k, n).value) << k << " " << n;
    EXPECT_THROW(cohen_gamma04(4, 2), invalid_input);
    EXPECT_THROW(cohen_gamma04(3, 1), invalid_input);
}
