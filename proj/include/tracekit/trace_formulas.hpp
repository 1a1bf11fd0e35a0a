#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "tracekit/class_numbers.hpp"
#include "tracekit/cusp_terms.hpp"

namespace tracekit {

struct TraceQuery {
    i64 N = 1;
    int k = 2;
    DirichletChar chi;
    i64 n = 1;
    std::optional<i64> ell;

    TraceQuery() = default;
    TraceQuery(i64 N_, int k_, i64 n_) : N(N_), k(k_), chi(trivial_character(N_)), n(n_) {}
    TraceQuery(i64 N_, int k_, DirichletChar chi_, i64 n_) : N(N_), k(k_), chi(std::move(chi_)), n(n_) {}
};

struct TraceResult {
    CycloNum value;
    CycloNum elliptic;   // -1/2 sum over t^2 <= 4n, scalar slice included
    CycloNum cusp;       // -1/2 sum over ad = n
    CycloNum correction; // k = 2, trivial character
    bool parity_ok = true;
};

namespace detail {

inline void check_query(i64 N, int k, i64 n)
{
    if (N < 1) throw invalid_input("level must be positive");
    if (k < 2) throw invalid_input("weight must be at least 2");
    if (n < 1) throw invalid_input("n must be positive");
}

inline void check_char(i64 N, const DirichletChar& chi)
{
    if (chi.modulus() != N) throw invalid_input("character modulus must equal the level");
}

// H((4n - t^2)/u^2), zero off the integers
inline Rational H_scaled(i64 num, i64 u2)
{
    if (num % u2 != 0) return 0;
    return hurwitz_H(num / u2);
}

// sum_{u | N} H((4n - t^2)/u^2) C_{N,chi}(u, t, n)
inline CycloNum class_weight_H(i64 N, const DirichletChar& chi, i64 t, i64 n)
{
    CycloNum s(0L);
    const i64 D = 4 * n - t * t;
    for (i64 u : divisors(N)) {
        Rational h = H_scaled(D, u * u);
        if (sgn(h) == 0) continue;
        CycloNum c = C_coeff(N, chi, u, t, n);
        if (!c.is_zero()) s += c * h;
    }
    return s;
}

// primed sum over u of h0((t^2 - 4n)/u^2) B((N,u), t, n)
inline CycloNum class_weight_h0(i64 N, const DirichletChar& chi, i64 t, i64 n)
{
    const i64 D = t * t - 4 * n;
    if (D == 0) return B_coeff(N, chi, N, t, n) * h0(0);
    CycloNum s(0L);
    const i64 A = D < 0 ? -D : D;
    for (i64 u = 1; u * u <= A; ++u) {
        if (A % (u * u) != 0) continue;
        Rational h = h0(D / (u * u));
        if (sgn(h) == 0) continue;
        CycloNum b = B_coeff(N, chi, gcd64(N, u), t, n);
        if (!b.is_zero()) s += b * h;
    }
    return s;
}

inline CycloNum sum_over_t(i64 tmax, int w, i64 n, bool fold, const std::function<CycloNum(i64)>& weight)
{
    CycloNum s(0L);
    for (i64 t = fold ? 0 : -tmax; t <= tmax; ++t) {
        CycloNum c = weight(t);
        if (c.is_zero()) continue;
        Int p = gegenbauer(w, Int(t), Int(n));
        if (fold && t > 0) p *= 2;
        s += c * Rational(p);
    }
    return s;
}

inline i64 t_bound_elliptic(i64 n) { return isqrt64(4 * n); }

} // namespace detail

// tr(T_n, S_k(N, chi))
inline TraceResult trace_hecke_cusp(i64 N, const DirichletChar& chi, int k, i64 n, bool fold = true)
{
    detail::check_query(N, k, n);
    detail::check_char(N, chi);
    TraceResult r;
    if (!parity_ok(chi, k)) {
        r.parity_ok = false;
        return r;
    }
    CycloNum ell = detail::sum_over_t(detail::t_bound_elliptic(n), k - 2, n, fold,
                                      [&](i64 t) { return detail::class_weight_H(N, chi, t, n); });
    r.elliptic = ell * Rational(-1, 2);
    CycloNum cu(0L);
    for (i64 a : divisors(n)) {
        const i64 d = n / a;
        cu += phi_chi(N, chi, a, d) * Rational(ipow(Int(std::min(a, d)), k - 1));
    }
    r.cusp = cu * Rational(-1, 2);
    if (k == 2 && chi.is_trivial()) r.correction = CycloNum(sigma1_N(N, n));
    r.value = r.elliptic + r.cusp + r.correction;
    return r;
}

inline TraceResult trace_hecke_cusp(const TraceQuery& q) { return trace_hecke_cusp(q.N, q.chi, q.k, q.n); }

enum class FullVariant { H, h0 };

// tr(T_n, M_k(N, chi) + S_k(N, chi))
inline CycloNum trace_hecke_full(i64 N, const DirichletChar& chi, int k, i64 n, FullVariant v = FullVariant::H,
                                 bool fold = true)
{
    detail::check_query(N, k, n);
    detail::check_char(N, chi);
    if (!parity_ok(chi, k)) return CycloNum(0L);
    // t^2 - 4n = -(square) needs |t| <= n + 1
    CycloNum s = detail::sum_over_t(n + 1, k - 2, n, fold, [&](i64 t) {
        return v == FullVariant::H ? detail::class_weight_H(N, chi, t, n) : detail::class_weight_h0(N, chi, t, n);
    });
    s = -s;
    if (k == 2 && chi.is_trivial()) s += CycloNum(sigma1_N(N, n));
    return s;
}

inline CycloNum trace_hecke_full(const TraceQuery& q) { return trace_hecke_full(q.N, q.chi, q.k, q.n); }

inline CycloNum scalar_term(i64 N, const DirichletChar& chi, int k, i64 n)
{
    detail::check_query(N, k, n);
    detail::check_char(N, chi);
    i64 s;
    if (!is_square64(n, &s)) return CycloNum(0L);
    if (!parity_ok(chi, k)) return CycloNum(0L);
    Rational c = make_rational(Int(index_phi1(N)) * (k - 1) * ipow(Int(s), k - 2), 12);
    return chi(s) * c;
}

// the t^2 = 4n part of the elliptic sum in trace_hecke_cusp
inline CycloNum scalar_slice(i64 N, const DirichletChar& chi, int k, i64 n)
{
    detail::check_query(N, k, n);
    detail::check_char(N, chi);
    i64 s;
    if (!is_square64(n, &s)) return CycloNum(0L);
    if (!parity_ok(chi, k)) return CycloNum(0L);
    CycloNum acc(0L);
    for (i64 t : {2 * s, -2 * s}) {
        CycloNum w(0L);
        for (i64 u : divisors(N)) w += C_coeff(N, chi, u, t, n) * hurwitz_H(0);
        acc += w * Rational(gegenbauer(k - 2, Int(t), Int(n)));
    }
    return acc * Rational(-1, 2);
}

inline std::vector<CycloNum> trace_series(i64 N, const DirichletChar& chi, i64 n, int k_max)
{
    if (k_max < 2) throw invalid_input("k_max must be at least 2");
    std::vector<CycloNum> out;
    for (int k = 2; k <= k_max; ++k) out.push_back(trace_hecke_full(N, chi, k, n));
    return out;
}

namespace detail {

inline void check_al(i64 N, i64 ell, int k, i64 n)
{
    check_query(N, k, n);
    check_exact_divisor(N, ell);
    if (k % 2 != 0) throw invalid_input("Atkin-Lehner traces need even weight");
}

// sum_{u | ell, u' | ell'} H((4 ell n - t^2)/(u u')^2) C_{ell'}(u', t, ell n) mu(u)
inline Rational al_weight(i64 N, i64 ell, i64 t, i64 n)
{
    if (mod(t, ell) != 0) return 0;
    const i64 ellp = N / ell, m = ell * n, D = 4 * m - t * t;
    Rational s = 0;
    for (i64 u : divisors(ell)) {
        int mu = moebius(u);
        for (i64 up : divisors(ellp)) {
            Rational h = H_scaled(D, (u * up) * (u * up));
            if (sgn(h) == 0) continue;
            Int c = C_int(ellp, up, t, m);
            if (sgn(c) != 0) s += h * Rational(c * mu);
        }
    }
    return s;
}

} // namespace detail

struct AtkinLehnerResult {
    Rational value, elliptic, cusp, correction;
};

// tr(T_n o W_ell, S_k(N)), normalized
inline AtkinLehnerResult trace_atkin_lehner(i64 N, i64 ell, int k, i64 n, bool fold = true)
{
    detail::check_al(N, ell, k, n);
    const int w = k - 2;
    const i64 m = ell * n;
    const Rational norm(1, ipow(Int(ell), w / 2));
    Rational e = 0;
    for (i64 t = fold ? 0 : -detail::t_bound_elliptic(m); t <= detail::t_bound_elliptic(m); ++t) {
        Rational c = detail::al_weight(N, ell, t, n);
        if (sgn(c) == 0) continue;
        Int p = gegenbauer(w, Int(t), Int(m));
        if (fold && t > 0) p *= 2;
        e += c * Rational(p);
    }
    AtkinLehnerResult r;
    r.elliptic = Rational(-1, 2) * e * norm;
    Rational cu = 0;
    for (i64 a : divisors(m)) {
        const i64 d = m / a;
        cu += phi_ell(N, ell, a, d) * Rational(ipow(Int(std::min(a, d)), k - 1));
    }
    r.cusp = Rational(-1, 2) * cu * norm;
    if (k == 2) r.correction = Rational(sigma1_N(N, n));
    r.value = r.elliptic + r.cusp + r.correction;
    return r;
}

// The same double coset on M_k(N) + S_k(N), without the ell^{w/2} normalization.
inline Rational trace_atkin_lehner_full(i64 N, i64 ell, int k, i64 n)
{
    detail::check_al(N, ell, k, n);
    const i64 m = ell * n;
    Rational s = 0;
    for (i64 t = -(m + 1); t <= m + 1; ++t) {
        Rational c = detail::al_weight(N, ell, t, n);
        if (sgn(c) != 0) s += c * Rational(gegenbauer(k - 2, Int(t), Int(m)));
    }
    s = -s;
    if (k == 2) s += Rational(sigma1_N(N, n));
    return s;
}

// closed form of tr(T_n, S_k(Gamma0(4))), n odd
inline Int cohen_gamma04(int k, i64 n)
{
    if (k < 2 || k % 2 != 0) throw invalid_input("cohen_gamma04 needs even k >= 2");
    if (n < 1 || n % 2 == 0) throw invalid_input("cohen_gamma04 needs odd n");
    Rational s = 0;
    for (i64 a : divisors(n)) s += Rational(ipow(Int(std::min(a, n / a)), k - 1));
    s *= Rational(-3, 2);
    Rational e = 0;
    for (i64 x = -isqrt64(n); x * x <= n; ++x) e += Rational(gegenbauer(k - 2, Int(2 * x), Int(n))) * hurwitz_H(n - x * x);
    s -= 3 * e;
    if (k == 2) s += Rational(sigma1(n));
    if (s.get_den() != 1) throw internal_error("cohen_gamma04 produced a non-integer");
    return s.get_num();
}

} // namespace tracekit
