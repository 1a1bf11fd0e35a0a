#include <gtest/gtest.h>

#include <random>

#include "tracekit/period_oracle.hpp"
#include "tracekit/trace_formulas.hpp"

using namespace tracekit;

namespace {

template <class F>
DenseMatrix<F> power(const DenseMatrix<F>& m, int e)
{
    DenseMatrix<F> r = DenseMatrix<F>::identity(m.rows());
    for (int i = 0; i < e; ++i) r = r * m;
    return r;
}

IntMat2 random_sl2(std::mt19937& rng, int len)
{
    std::uniform_int_distribution<int> pick(0, 2);
    const IntMat2 g[3] = {gens::S(), gens::T(), gens::Tinv()};
    IntMat2 m = gens::I();
    for (int i = 0; i < len; ++i) m = m * g[pick(rng)];
    return m;
}

} // namespace

TEST(CosetTable, Sizes)
{
    EXPECT_EQ(coset_table(1)->size(), 1u);
    EXPECT_EQ(coset_table(4)->size(), 6u);
    EXPECT_EQ(coset_table(6)->size(), 12u);
    for (i64 N = 1; N <= 30; ++N) {
        auto t = coset_table(N);
        for (size_t i = 0; i < t->size(); ++i) EXPECT_EQ(t->rep(i).det(), 1);
    }
}

TEST(PeriodModule, GeneratorRelations)
{
    for (i64 N : {1, 3, 4, 5, 7})
        for (auto& chi : enumerate_characters(N))
            for (int w = 0; w <= 4; ++w)
                detail::with_module(N, chi, w, [&](auto& m) {
                    if (m.dim() == 0) return CycloNum(0L);
                    using F = std::decay_t<decltype(m.act_gamma(gens::S())(0, 0))>;
                    auto I = DenseMatrix<F>::identity(m.dim());
                    auto S = m.act_gamma(gens::S()), U = m.act_gamma(gens::U());
                    EXPECT_TRUE(S * S == I) << chi.label() << " w=" << w;
                    EXPECT_TRUE(U * U * U == I) << chi.label() << " w=" << w;
                    if (w == 0) EXPECT_TRUE(power(m.act_gamma(gens::T()), static_cast<int>(N)) == I);
                    return CycloNum(0L);
                });
}

TEST(PeriodModule, DimensionAndParity)
{
    PeriodModule<Rational> m(4, trivial_character(4), 3);
    EXPECT_EQ(m.dim(), 0u); // odd weight with even character
    PeriodModule<Rational> m2(4, trivial_character(4), 2);
    EXPECT_EQ(m2.dim(), 18u);
}

TEST(PeriodModule, TraceOfSingleMatrix)
{
    // trace of |M on the induced module = p_w(tr M, det M) c(M)
    std::mt19937 rng(17);
    std::uniform_int_distribution<int> e(-4, 4);
    int tested = 0;
    for (i64 N = 1; N <= 8; ++N)
        for (auto& chi : enumerate_characters(N))
            for (int w = 0; w <= 8; w += (chi.order() > 2 ? 3 : 1))
                detail::with_module(N, chi, w, [&](auto& m) {
                    if (m.dim() == 0) return CycloNum(0L);
                    for (int trial = 0; trial < 3; ++trial) {
                        IntMat2 M(e(rng), e(rng), e(rng), e(rng));
                        if (sgn(M.det()) <= 0) continue;
                        const i64 n = to_i64(M.det());
                        CycloNum tr = detail::to_cyclo(m.act_sigma(SigmaDesc::hecke(n), M).trace());
                        CycloNum want = c_class_direct(N, chi, M) * Rational(gegenbauer(w, M.trace(), M.det()));
                        EXPECT_EQ(tr, want) << chi.label() << " w=" << w << " M=" << M;
                        ++tested;
                    }
                    return CycloNum(0L);
                });
    EXPECT_GT(tested, 100);
}

TEST(PeriodModule, LevelOneIsClassicalSlash)
{
    PeriodModule<Rational> m(1, trivial_character(1), 4);
    IntMat2 M(2, 1, 1, 3);
    auto A = m.act_sigma(SigmaDesc::hecke(5), M);
    auto ref = detail::slash_matrix(M, 4);
    for (size_t i = 0; i < 5; ++i)
        for (size_t j = 0; j < 5; ++j) EXPECT_EQ(A(i, j), Rational(ref[i * 5 + j])) << i << "," << j;
}

TEST(PeriodModule, CompositionWithGamma)
{
    // |(gM) = |g then |M
    std::mt19937 rng(23);
    for (i64 N : {1, 4, 6})
        for (int w : {0, 2, 5}) {
            for (auto& chi : enumerate_characters(N)) {
                if (!parity_ok(chi, w + 2) || chi.order() > 2) continue;
                PeriodModule<Rational> m(N, chi, w);
                const GroupRingElem T2 = build_Tn(2);
                for (auto& [p, c] : T2.terms())
                    for (int trial = 0; trial < 3; ++trial) {
                        IntMat2 g = random_sl2(rng, 6);
                        auto lhs = m.act_sigma(SigmaDesc::hecke(2), g * p.mat());
                        auto rhs = m.act_sigma(SigmaDesc::hecke(2), p.mat()) * m.act_gamma(g);
                        ASSERT_TRUE(lhs == rhs) << chi.label() << " w=" << w << " M=" << p.mat() << " g=" << g;
                    }
            }
        }
}

TEST(PeriodSpace, Examples)
{
    auto one = trivial_character(1);
    EXPECT_EQ(period_space_dim(1, one, 10), 3);
    EXPECT_EQ(period_space_dim(1, one, 0), 0);
    EXPECT_EQ(trace_on_W(1, one, 10, SigmaDesc::hecke(1)), CycloNum(3L));
    EXPECT_EQ(trace_on_W(1, one, 10, SigmaDesc::hecke(2)), CycloNum(2001L));
    EXPECT_EQ(trace_coboundary(1, one, 10, SigmaDesc::hecke(2)), CycloNum(2049L));
}

TEST(PeriodSpace, KernelCertification)
{
    for (i64 N : {1, 2, 5, 6})
        for (auto& chi : enumerate_characters(N))
            for (int w = 0; w <= 4; ++w)
                detail::with_module(N, chi, w, [&](auto& m) {
                    const auto& W = m.period_space();
                    auto s = m.gamma_ring_matrix(one_plus_S()), u = m.gamma_ring_matrix(one_plus_U_U2());
                    auto t = m.gamma_ring_matrix(one_minus_T());
                    for (auto& v : W.rows) {
                        for (auto& x : s.apply(v)) EXPECT_TRUE(FieldTraits<std::decay_t<decltype(x)>>::is_zero(x));
                        for (auto& x : u.apply(v)) EXPECT_TRUE(FieldTraits<std::decay_t<decltype(x)>>::is_zero(x));
                    }
                    for (auto& v : m.t_invariants().rows)
                        for (auto& x : t.apply(v)) EXPECT_TRUE(FieldTraits<std::decay_t<decltype(x)>>::is_zero(x));
                    return CycloNum(0L);
                });
}

TEST(PeriodSpace, KernelSumRank)
{
    // Ker(1+S) + Ker(1+U+U^2) is everything except at w = 0 with trivial character
    for (i64 N = 1; N <= 9; ++N)
        for (auto& chi : enumerate_characters(N))
            for (int w = 0; w <= 4; ++w)
                detail::with_module(N, chi, w, [&](auto& m) {
                    if (m.dim() == 0) return CycloNum(0L);
                    size_t want = m.dim() - (w == 0 && chi.is_trivial() ? 1 : 0);
                    EXPECT_EQ(m.kernel_sum_rank(), want) << chi.label() << " w=" << w;
                    return CycloNum(0L);
                });
}

TEST(PeriodSpace, TInvariantsCountAdmissibleCusps)
{
    for (i64 N = 1; N <= 16; ++N)
        for (auto& chi : enumerate_characters(N))
            for (int w : {0, 1, 2}) {
                if (!parity_ok(chi, w + 2) || chi.order() > 4) continue;
                i64 by_rep = 0;
                for (auto& c : cusp_reps(N)) by_rep += c.admissible(chi) ? 1 : 0;
                EXPECT_EQ(admissible_cusp_count(N, chi), by_rep) << chi.label();
                auto rep = coboundary_report(N, chi, w, SigmaDesc::hecke(1));
                EXPECT_EQ(static_cast<i64>(rep.dim_D), by_rep) << chi.label() << " w=" << w;
            }
}

TEST(PeriodSpace, TraceMatchesClosedFormulas)
{
    for (i64 N = 1; N <= 6; ++N)
        for (auto& chi : enumerate_characters(N))
            for (int k = 2; k <= 7; ++k) {
                if (!parity_ok(chi, k)) continue;
                for (i64 n = 1; n <= 4; ++n) {
                    EXPECT_EQ(trace_on_W(N, chi, k - 2, SigmaDesc::hecke(n)), trace_hecke_full(N, chi, k, n))
                        << chi.label() << " k=" << k << " n=" << n;
                    EXPECT_EQ(trace_coboundary(N, chi, k - 2, SigmaDesc::hecke(n)), eisenstein_trace(N, chi, k, n))
                        << chi.label() << " k=" << k << " n=" << n;
                }
            }
}

TEST(PeriodSpace, LevelFourWeightTwo)
{
    auto one = trivial_character(4);
    for (i64 n = 1; n <= 9; n += 2)
        EXPECT_EQ(trace_on_W(4, one, 0, SigmaDesc::hecke(n)),
                  CycloNum(Int(2 * cohen_gamma04(2, n))) + eisenstein_trace(4, one, 2, n));
}

TEST(PeriodSpace, AtkinLehnerTraces)
{
    for (i64 N : {2, 3, 6, 10})
        for (i64 ell : divisors(N)) {
            if (gcd64(ell, N / ell) != 1) continue;
            for (int k : {2, 4, 6})
                for (i64 n = 1; n <= 3; ++n)
                    EXPECT_EQ(trace_on_W(N, trivial_character(N), k - 2, SigmaDesc::atkin_lehner(n, ell)),
                              CycloNum(trace_atkin_lehner_full(N, ell, k, n)))
                        << N << " " << ell << " k=" << k << " n=" << n;
        }
}

TEST(PeriodSpace, WholeModuleDiffersOnlyInWeightTwo)
{
    for (i64 N = 1; N <= 6; ++N)
        for (auto& chi : enumerate_characters(N))
            for (int w = 0; w <= 3; ++w)
                for (i64 n = 1; n <= 3; ++n)
                    detail::with_module(N, chi, w, [&](auto& m) {
                        const GroupRingElem Tn = build_Tn(n);
                        CycloNum dW = trace_on_W(m, SigmaDesc::hecke(n), Tn);
                        CycloNum dV = trace_on_V(m, SigmaDesc::hecke(n), Tn);
                        CycloNum want = (w == 0 && chi.is_trivial()) ? CycloNum(sigma1_N(N, n)) : CycloNum(0L);
                        EXPECT_EQ(dW - dV, want) << chi.label() << " w=" << w << " n=" << n;
                        return CycloNum(0L);
                    });
}

TEST(PeriodSpace, RejectsCharacterWithAtkinLehner)
{
    EXPECT_THROW(trace_on_W(5, enumerate_characters(5)[2], 0, SigmaDesc::atkin_lehner(1, 5)), invalid_input);
    EXPECT_THROW(trace_on_W(4, trivial_character(4), 0, SigmaDesc::atkin_lehner(1, 2)), invalid_input);
}

TEST(PeriodSpace, WrongOperatorIsDetected)
{
    // a perturbed operator no longer preserves the period space
    GroupRingElem bad = build_Tn(2) + GroupRingElem::single({2, 1, 0, 1});
    EXPECT_THROW(trace_on_W(1, trivial_character(1), 10, SigmaDesc::hecke(2), bad), internal_error);
}
