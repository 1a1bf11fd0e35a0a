#include <gtest/gtest.h>

#include <array>
#include <random>
#include <set>

#include "tracekit/class_numbers.hpp"
#include "tracekit/hecke_operator.hpp"
#include "tracekit/matrix_forms.hpp"

using namespace tracekit;

namespace {

using M = std::array<i64, 4>;

M canon(M m)
{
    i64 s = m[0] ? m[0] : m[1] ? m[1] : m[2] ? m[2] : m[3];
    if (s < 0)
        for (auto& x : m) x = -x;
    return m;
}

M mul(const M& x, const M& y)
{
    return {x[0] * y[0] + x[1] * y[2], x[0] * y[1] + x[1] * y[3], x[2] * y[0] + x[3] * y[2], x[2] * y[1] + x[3] * y[3]};
}

// conjugates g M g^{-1} for g a word of length <= depth in S, T and inverses
std::set<M> conj_ball(const M& start, int depth)
{
    static const std::array<std::pair<M, M>, 4> gens = {{
        {{0, -1, 1, 0}, {0, 1, -1, 0}},
        {{0, 1, -1, 0}, {0, -1, 1, 0}},
        {{1, 1, 0, 1}, {1, -1, 0, 1}},
        {{1, -1, 0, 1}, {1, 1, 0, 1}},
    }};
    std::set<M> seen{canon(start)};
    std::vector<M> frontier{canon(start)};
    for (int d = 0; d < depth; ++d) {
        std::vector<M> next;
        for (const M& m : frontier)
            for (auto& [g, gi] : gens) {
                M c = canon(mul(mul(g, m), gi));
                if (seen.insert(c).second) next.push_back(c);
            }
        frontier = std::move(next);
    }
    return seen;
}

bool conjugate_by_search(const M& x, const M& y, int depth = 6)
{
    auto bx = conj_ball(x, depth);
    auto by = conj_ball(y, depth);
    for (const M& m : bx)
        if (by.count(m)) return true;
    return false;
}

IntMat2 im(const M& m) { return {m[0], m[1], m[2], m[3]}; }

std::vector<M> matrices(i64 n, i64 bound)
{
    std::vector<M> out;
    for (i64 a = -bound; a <= bound; ++a)
        for (i64 b = -bound; b <= bound; ++b)
            for (i64 c = -bound; c <= bound; ++c)
                for (i64 d = -bound; d <= bound; ++d)
                    if (a * d - b * c == n) out.push_back(canon({a, b, c, d}));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

} // namespace

TEST(ProjCanonical, Examples)
{
    EXPECT_EQ(proj_canonical({-1, 0, 0, -1}).mat(), IntMat2(1, 0, 0, 1));
    EXPECT_EQ(proj_canonical({0, -1, 1, 0}).mat(), IntMat2(0, 1, -1, 0));
    EXPECT_EQ(proj_canonical({2, 3, 0, 1}).mat(), IntMat2(2, 3, 0, 1));
    EXPECT_THROW(proj_canonical({0, 1, 1, 0}), invalid_input);
}

TEST(ProjCanonical, QuotientByMinusOne)
{
    for (const M& m : matrices(3, 3)) {
        IntMat2 x = im(m);
        EXPECT_EQ(proj_canonical(-x), proj_canonical(x));
        EXPECT_EQ(proj_canonical(proj_canonical(x).mat()), proj_canonical(x));
    }
}

TEST(QuadForm, Examples)
{
    auto u = quad_form_of(gens::U());
    EXPECT_EQ(u, (QuadForm{1, -1, 1}));
    EXPECT_EQ(u.disc(), -3);
    auto s = quad_form_of(gens::S());
    EXPECT_EQ(s, (QuadForm{1, 0, 1}));
    EXPECT_EQ(s.disc(), -4);
    auto z = quad_form_of({3, 0, 0, 3});
    EXPECT_EQ(z.disc(), 0);
    EXPECT_EQ(z.content(), 0);
}

TEST(QuadForm, DiscriminantIdentityExhaustive)
{
    for (long a = -5; a <= 5; ++a)
        for (long b = -5; b <= 5; ++b)
            for (long c = -5; c <= 5; ++c)
                for (long d = -5; d <= 5; ++d) {
                    IntMat2 m(a, b, c, d);
                    ASSERT_EQ(quad_form_of(m).disc(), m.trace() * m.trace() - 4 * m.det());
                }
}

TEST(ReduceForm, Examples)
{
    EXPECT_EQ(reduce_form({1, 0, 1}), (QuadForm{1, 0, 1}));
    EXPECT_EQ(reduce_form({2, 2, 3}), (QuadForm{2, 2, 3}));
    EXPECT_EQ(reduce_form({1, 3, 0}), (QuadForm{1, 3, 0}));
}

TEST(ReduceForm, InvariantUnderSL2)
{
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> coef(-6, 6), pick(0, 3);
    const IntMat2 g[4] = {gens::S(), gens::T(), gens::Tinv(), gens::S() * gens::S() * gens::S()};
    for (int trial = 0; trial < 400; ++trial) {
        QuadForm q{coef(rng), coef(rng), coef(rng)};
        if (q.disc() == 0 && q.content() == 0) continue;
        QuadForm r = q;
        for (int j = 0; j < 8; ++j) r = r.compose(g[pick(rng)]);
        EXPECT_EQ(reduce_form(r), reduce_form(q)) << q << " vs " << r;
    }
}

TEST(ClassLabel, SpecificPairs)
{
    auto U = gens::U();
    EXPECT_NE(class_label(U), class_label(U * U));
    EXPECT_FALSE(conjugate_by_search({1, -1, 1, 0}, canon({0, -1, 1, -1}), 8));

    IntMat2 a(1, 0, 0, 2), b(2, 1, 0, 1);
    EXPECT_EQ(class_label(a) == class_label(b), conjugate_by_search({1, 0, 0, 2}, {2, 1, 0, 1}, 8));
}

TEST(ClassLabel, ConjugationInvariant)
{
    std::mt19937 rng(11);
    std::uniform_int_distribution<int> pick(0, 3);
    const IntMat2 g[4] = {gens::S(), gens::T(), gens::Tinv(), gens::S().adj()};
    for (i64 n = 1; n <= 6; ++n)
        for (const M& m : matrices(n, 3)) {
            IntMat2 x = im(m);
            ClassLabel l = class_label(x);
            IntMat2 y = x;
            for (int j = 0; j < 6; ++j) {
                const IntMat2& h = g[pick(rng)];
                y = h * y * h.adj();
                ASSERT_EQ(class_label(y), l) << x << " -> " << y;
            }
        }
}

TEST(ClassLabel, CompleteAtSmallScale)
{
    // equal labels must come from matrices that a bounded search can conjugate
    for (i64 n = 1; n <= 6; ++n) {
        std::map<ClassLabel, std::vector<M>> groups;
        for (const M& m : matrices(n, 3)) groups[class_label(im(m))].push_back(m);
        for (auto& [l, ms] : groups) {
            auto ball = conj_ball(ms[0], 7);
            for (size_t i = 1; i < ms.size(); ++i) {
                bool found = ball.count(ms[i]) > 0 || conjugate_by_search(ms[0], ms[i], 7);
                EXPECT_TRUE(found) << "n=" << n << " label " << l << " " << im(ms[0]) << " vs " << im(ms[i]);
            }
        }
    }
}

TEST(Epsilon, Examples)
{
    EXPECT_EQ(epsilon({2, 0, 0, 2}), Rational(1, 6));
    EXPECT_EQ(epsilon({1, 1, 0, 1}), 0);
    EXPECT_EQ(epsilon(gens::S()), Rational(-1, 2));
    EXPECT_EQ(epsilon(gens::U()), Rational(-1, 3));
    EXPECT_EQ(epsilon({1, 0, 0, 2}), 1);
    EXPECT_EQ(epsilon({2, 1, 1, 1}), 0); // disc 5
}

TEST(StabOrder, Examples)
{
    EXPECT_EQ(stab_order(gens::U()), Int(3));
    EXPECT_EQ(stab_order(gens::S()), Int(2));
    EXPECT_FALSE(stab_order({1, 1, 0, 1}));
    EXPECT_EQ(stab_order({0, -2, 1, 0}), Int(1)); // disc -8
}

TEST(ClassCount, EllipticClassesMatchHurwitz)
{
    for (i64 n = 1; n <= 12; ++n) {
        auto classes = nonzero_eps_classes(n, 2 * n + 2);
        for (i64 t = 0; t * t < 4 * n; ++t) {
            const i64 D = t * t - 4 * n;
            for (i64 u = 1; u * u <= -D; ++u) {
                if (D % (u * u) != 0) continue;
                Rational s = 0;
                for (auto& [l, m] : classes)
                    if (l.t == t && quad_form_of(m).disc() == D && l.content % u == 0) s += epsilon(m);
                Rational want = -hurwitz_H(-D / (u * u)) * (t == 0 ? 1 : 2);
                EXPECT_EQ(s, want) << "n=" << n << " t=" << t << " u=" << u;
            }
        }
    }
}

TEST(ClassCount, EpsilonSumIsMinusSigma)
{
    for (i64 n = 1; n <= 12; ++n) {
        Rational s = 0;
        for (auto& [l, m] : nonzero_eps_classes(n, 2 * n + 2)) s += epsilon(m);
        EXPECT_EQ(s, -Rational(sigma1(n))) << n;
    }
}
