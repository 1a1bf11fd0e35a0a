#pragma once

#include <cassert>
#include <limits>
#include <map>
#include <mutex>
#include <tuple>

#include "tracekit/dirichlet.hpp"
#include "tracekit/p1.hpp"

namespace tracekit {

namespace detail {

inline bool valid_local_key(i64 N, i64 u, i64 t, i64 n)
{
    if (u < 1 || N % u != 0) return false;
    i64 D = t * t - 4 * n;
    return D % (u * u) == 0;
}

inline bool root_mod(i64 alpha, i64 t, i64 n, i64 M)
{
    __int128 v = static_cast<__int128>(alpha) * alpha - static_cast<__int128>(t) * alpha + n;
    v %= M;
    return v == 0;
}

} // namespace detail

// |{alpha in (Z/N)^x : alpha^2 - t alpha + n = 0 mod N u}|, by direct enumeration
inline i64 count_S_direct(i64 N, i64 u, i64 t, i64 n)
{
    if (!detail::valid_local_key(N, u, t, n)) return 0;
    i64 cnt = 0;
    for (i64 a = 0; a < N; ++a) {
        if (gcd64(a, N) != 1) continue;
        bool in = detail::root_mod(a == 0 ? N : a, t, n, N * u);
#ifndef NDEBUG
        // membership must not depend on the lift of a mod N to Z/Nu
        for (i64 k = 1; k < u; ++k) assert(detail::root_mod(a + k * N, t, n, N * u) == in);
#endif
        if (in) ++cnt;
    }
    if (N == 1) cnt = 1;
    return cnt;
}

// same count, multiplicatively over the prime powers of N
inline i64 count_S(i64 N, i64 u, i64 t, i64 n)
{
    if (!detail::valid_local_key(N, u, t, n)) return 0;
    i64 total = 1;
    for (auto [p, a] : factor(N).pf) {
        i64 q = 1;
        for (int j = 0; j < a; ++j) q *= p;
        i64 qi = 1;
        for (i64 uu = u; uu % p == 0; uu /= p) qi *= p;
        i64 cnt = 0;
        for (i64 al = 1; al < q; ++al)
            if (al % p != 0 && detail::root_mod(al, t, n, q * qi)) ++cnt;
        total *= cnt;
        if (total == 0) return 0;
    }
    return total;
}

inline i64 count_S_plain(i64 N, i64 t, i64 n) { return count_S(N, 1, t, n); }

namespace detail {

struct LocalMemo {
    std::mutex mu;
    std::map<std::tuple<i64, int, i64, i64, i64>, CycloNum> B;
};

inline LocalMemo& local_memo()
{
    static LocalMemo m;
    return m;
}

} // namespace detail

// (phi1(N)/phi1(N/u)) * sum_{alpha in S_N(u,t,n)} chi(alpha)
inline CycloNum B_coeff(i64 N, const DirichletChar& chi, i64 u, i64 t, i64 n)
{
    if (chi.modulus() != N) throw invalid_input("B_coeff: character modulus mismatch");
    if (!detail::valid_local_key(N, u, t, n)) return CycloNum(0L);
    auto key = std::make_tuple(N, chi.index(), u, t, n);
    auto& memo = detail::local_memo();
    {
        std::lock_guard<std::mutex> lk(memo.mu);
        auto it = memo.B.find(key);
        if (it != memo.B.end()) return it->second;
    }
    std::vector<Rational> acc(std::max(1, chi.order()), Rational(0));
    for (i64 a = 0; a < N; ++a) {
        if (gcd64(a, N) != 1) continue;
        if (N > 1 && !detail::root_mod(a, t, n, N * u)) continue;
        acc[chi.exponent(a)] += 1;
    }
    CycloNum s(0L);
    for (int e = 0; e < static_cast<int>(acc.size()); ++e)
        if (sgn(acc[e]) != 0) s += CycloNum::zeta(chi.order(), e) * acc[e];
    s *= make_rational(index_phi1(N), index_phi1(N / u));
    std::lock_guard<std::mutex> lk(memo.mu);
    memo.B.emplace(key, s);
    return s;
}

// Moebius inverse of B in u
inline CycloNum C_coeff(i64 N, const DirichletChar& chi, i64 u, i64 t, i64 n)
{
    if (u < 1 || N % u != 0) return CycloNum(0L);
    CycloNum s(0L);
    for (i64 d : divisors(u)) {
        int mu = moebius(d);
        if (mu == 0) continue;
        CycloNum b = B_coeff(N, chi, u / d, t, n);
        if (mu > 0)
            s += b;
        else
            s -= b;
    }
    return s;
}

inline Int C_int(i64 N, i64 u, i64 t, i64 n)
{
    return C_coeff(N, trivial_character(N), u, t, n).rational_value().get_num();
}

namespace detail {

inline Int local_C(i64 p, int a, int i, i64 D)
{
    if (i == 0) return 1;
    auto pw = [&](int e) { return ipow(Int(p), static_cast<unsigned long>(e)); };
    auto ceil2 = [](int x) { return (x + 1) / 2; };
    if (i == a) return pw(ceil2(a));
    constexpr int INF = std::numeric_limits<int>::max() / 4;
    int b = D == 0 ? INF : valuation(D, p);
    i64 Dp = 0; // D / p^b
    if (D != 0) {
        Dp = D;
        for (int j = 0; j < b; ++j) Dp /= p;
    }
    const bool same = ((i - a) % 2) == 0;
    if (p != 2) {
        if (same) {
            if (1 <= i && i <= b - a) return pw(ceil2(i)) - pw(ceil2(i) - 1);
            if (i == b - a + 1) return -pw(ceil2(i) - 1);
        } else if (i == b - a + 1) {
            return pw(i / 2) * legendre(Dp, p);
        }
        return 0;
    }
    if (same) {
        if (1 <= i && i <= b - a - 2) return pw(ceil2(i) - 1);
        if (i == b - a - 1) return -pw(ceil2(i) - 1);
        if (i == b - a) return pw(ceil2(i) - 1) * eps4(Dp);
    } else if (i == b - a + 1 && mod(Dp, 4) == 1) {
        return pw(i / 2) * kronecker(Dp, 2);
    }
    return 0;
}

} // namespace detail

// Multiplicative closed form: C_N(u, t, n) = |S_N(t,n)| * C_fast(N, u, t^2 - 4n).
inline Int C_fast(i64 N, i64 u, i64 D)
{
    if (u < 1 || N % u != 0) return 0;
    if (D % (u * u) != 0) return 0;
    Int r = 1;
    for (auto [p, a] : factor(N).pf) {
        int i = 0;
        for (i64 uu = u; uu % p == 0; uu /= p) ++i;
        if (p == 2 && i > 0 && mod(D / (u * u), 4) >= 2) {
            // D/u^2 is not a discriminant: no root survives mod 2^(a+i), so
            // C(2^i) = -B(2^(i-1)) / |S| = -(sum of the lower table entries)
            Int s = 0;
            for (int j = 0; j < i; ++j) s += detail::local_C(p, a, j, D);
            r *= -s;
            continue;
        }
        r *= detail::local_C(p, a, i, D);
    }
    return r;
}

inline i64 content_gcd(const IntMat2& M, i64 N)
{
    Int G = quad_form_of(M).content();
    return gcd(G, Int(N)).get_si(); // (0, N) = N
}

// sum of chi(a) over cosets A in Gamma0(N)\SL2(Z) with A M A^{-1} in Delta_n
inline CycloNum c_class_direct(i64 N, const DirichletChar& chi, const IntMat2& M)
{
    auto tab = coset_table(N);
    Mat64 m = reduce_mod(M, N);
    std::vector<Rational> acc(std::max(1, chi.order()), Rational(0));
    for (size_t i = 0; i < tab->size(); ++i) {
        Mat64 X = mulmod(mulmod(tab->rep64(i), m, N), tab->rep64_inv(i).reduce(N), N);
        if (X.c != 0 || gcd64(X.a, N) != 1) continue;
        acc[chi.exponent(X.a)] += 1;
    }
    CycloNum s(0L);
    for (int e = 0; e < static_cast<int>(acc.size()); ++e)
        if (sgn(acc[e]) != 0) s += CycloNum::zeta(chi.order(), e) * acc[e];
    return s;
}

inline CycloNum c_class(i64 N, const DirichletChar& chi, const IntMat2& M)
{
    return B_coeff(N, chi, content_gcd(M, N), to_i64(M.trace()), to_i64(M.det()));
}

inline void check_exact_divisor(i64 N, i64 ell)
{
    if (ell < 1 || N % ell != 0 || gcd64(ell, N / ell) != 1)
        throw invalid_input("ell must be an exact divisor of N");
}

// membership in Delta_n Theta_ell for a matrix known modulo N
inline bool in_delta_theta(const Mat64& X, i64 N, i64 ell)
{
    const i64 ellp = N / ell;
    if (X.c % N != 0) return false;
    if (mod(X.a + X.d, ell) != 0 || mod(X.a, ell) != 0) return false;
    if (gcd64(X.a, ellp) != 1) return false;
    return gcd64(X.b, ell) == 1;
}

inline i64 c_atkin_direct(i64 N, i64 ell, const IntMat2& M)
{
    check_exact_divisor(N, ell);
    auto tab = coset_table(N);
    Mat64 m = reduce_mod(M, N);
    i64 cnt = 0;
    for (size_t i = 0; i < tab->size(); ++i) {
        Mat64 X = mulmod(mulmod(tab->rep64(i), m, N), tab->rep64_inv(i).reduce(N), N);
        if (in_delta_theta(X, N, ell)) ++cnt;
    }
    return cnt;
}

inline Int c_atkin(i64 N, i64 ell, const IntMat2& M)
{
    check_exact_divisor(N, ell);
    const i64 t = to_i64(M.trace()), n = to_i64(M.det());
    if (mod(t, ell) != 0) return 0;
    const i64 ellp = N / ell;
    Int G = quad_form_of(M).content();
    i64 g1 = gcd(G, Int(ell)).get_si(), g2 = gcd(G, Int(ellp)).get_si();
    Int s = 0;
    for (i64 u : divisors(g1)) {
        int mu = moebius(u);
        if (mu == 0) continue;
        for (i64 u2 : divisors(g2)) s += mu * C_int(ellp, u2, t, n);
    }
    return s;
}

} // namespace tracekit
