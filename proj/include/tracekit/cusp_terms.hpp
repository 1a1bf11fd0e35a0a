#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "tracekit/local_counts.hpp"

namespace tracekit {

struct CuspRep {
    IntMat2 C; // (p, *; r, q) in SL2(Z), C(oo) = p/r
    i64 r = 1, s = 1;
    i64 width = 1;

    bool admissible(const DirichletChar& chi) const { return (chi.modulus() / gcd64(r, s)) % chi.conductor() == 0; }
};

// One representative per cusp of Gamma0(N): for each r | N, q over units mod (r, N/r).
inline const std::vector<CuspRep>& cusp_reps(i64 N)
{
    static std::mutex mu;
    static std::map<i64, std::shared_ptr<std::vector<CuspRep>>> memo;
    {
        std::lock_guard<std::mutex> lk(mu);
        auto it = memo.find(N);
        if (it != memo.end()) return *it->second;
    }
    auto out = std::make_shared<std::vector<CuspRep>>();
    for (i64 r : divisors(N)) {
        const i64 s = N / r, g = gcd64(r, s);
        for (i64 q0 = 0; q0 < g || (g == 1 && q0 == 0); ++q0) {
            if (gcd64(q0, g) != 1) continue;
            i64 q = q0;
            while (gcd64(q, r) != 1) q += g;
            auto [gg, x, y] = ext_gcd(q, r); // x q + y r = 1
            (void)gg;
            CuspRep c;
            c.C = IntMat2(x, -y, r, q);
            c.r = r;
            c.s = s;
            c.width = s / g;
            out->push_back(c);
            if (g == 1) break;
        }
    }
    std::lock_guard<std::mutex> lk(mu);
    auto [it, ins] = memo.emplace(N, out);
    (void)ins;
    return *it->second;
}

inline i64 cusp_count(i64 N)
{
    i64 c = 0;
    for (i64 r : divisors(N)) c += euler_phi(gcd64(r, N / r));
    return c;
}

// closed form for Delta_n with nebentypus
inline CycloNum phi_chi(i64 N, const DirichletChar& chi, i64 a, i64 d)
{
    if (chi.modulus() != N) throw invalid_input("phi_chi: character modulus mismatch");
    if (a < 1 || d < 1) throw invalid_input("phi_chi: a, d must be positive");
    const i64 Nc = N / chi.conductor();
    CycloNum total(0L);
    for (i64 r : divisors(N)) {
        const i64 s = N / r, g = gcd64(r, s);
        if (Nc % g != 0 || (a - d) % g != 0) continue;
        auto sol = crt_solve({{a, r}, {d, s}});
        if (!sol) continue;
        int e = chi.exponent_mod(sol->first, sol->second);
        if (e < 0) continue;
        total += CycloNum::zeta(chi.order(), e) * Rational(euler_phi(g));
    }
    return total;
}

// closed form for Delta_n Theta_ell, trivial character
inline Rational phi_ell(i64 N, i64 ell, i64 a, i64 d)
{
    check_exact_divisor(N, ell);
    if (a < 1 || d < 1) throw invalid_input("phi_ell: a, d must be positive");
    if ((a * d) % ell != 0 || (a + d) % ell != 0) return 0;
    const i64 ellp = N / ell;
    i64 sum = 0;
    for (i64 r : divisors(ellp)) {
        const i64 s = ellp / r, g = gcd64(r, s);
        if ((a - d) % g != 0 || gcd64(r, a) != 1 || gcd64(s, d) != 1) continue;
        sum += euler_phi(g);
    }
    return make_rational(euler_phi(ell) * sum, ell);
}

// Direct enumeration: (1/(a,d)) sum over admissible cusps C and b mod width*(a,d)
// of chi(top-left of C M_b C^{-1}) when C M_b C^{-1} lies in Delta_{ad}.
inline CycloNum phi_generic(i64 N, const DirichletChar& chi, i64 a, i64 d)
{
    if (chi.modulus() != N) throw invalid_input("phi_generic: character modulus mismatch");
    const i64 g = gcd64(a, d);
    std::vector<Rational> acc(std::max(1, chi.order()), Rational(0));
    for (const auto& cr : cusp_reps(N)) {
        if (!cr.admissible(chi)) continue;
        Mat64 C = reduce_mod(cr.C, N), Ci = reduce_mod(cr.C.adj(), N);
        for (i64 b = 0; b < cr.width * g; ++b) {
            Mat64 X = mulmod(mulmod(C, Mat64{a, b, 0, d}, N), Ci, N);
            if (X.c != 0 || gcd64(X.a, N) != 1) continue;
            acc[chi.exponent(X.a)] += 1;
        }
    }
    CycloNum s(0L);
    for (int e = 0; e < static_cast<int>(acc.size()); ++e)
        if (sgn(acc[e]) != 0) s += CycloNum::zeta(chi.order(), e) * acc[e];
    s *= Rational(1, g);
    return s;
}

inline Rational phi_generic_ell(i64 N, i64 ell, i64 a, i64 d)
{
    check_exact_divisor(N, ell);
    if ((a * d) % ell != 0) return 0;
    const i64 g = gcd64(a, d);
    i64 cnt = 0;
    for (const auto& cr : cusp_reps(N)) {
        Mat64 C = reduce_mod(cr.C, N), Ci = reduce_mod(cr.C.adj(), N);
        for (i64 b = 0; b < cr.width * g; ++b) {
            Mat64 X = mulmod(mulmod(C, Mat64{a, b, 0, d}, N), Ci, N);
            if (in_delta_theta(X, N, ell)) ++cnt;
        }
    }
    return make_rational(cnt, g);
}

inline bool parity_ok(const DirichletChar& chi, int k) { return chi.parity() == ((k % 2 == 0) ? 1 : -1); }

namespace detail {

inline CycloNum eis_sum(i64 N, const DirichletChar& chi, int k, i64 n, bool use_a)
{
    if (k < 2) throw invalid_input("weight must be at least 2");
    if (!parity_ok(chi, k)) return CycloNum(0L);
    CycloNum s(0L);
    for (i64 a : divisors(n)) {
        i64 d = n / a;
        Int w = ipow(Int(use_a ? a : d), k - 1);
        s += phi_chi(N, chi, a, d) * Rational(w);
    }
    if (k == 2 && chi.is_trivial()) s -= CycloNum(sigma1_N(N, n));
    return s;
}

inline Rational eis_sum_ell(i64 N, i64 ell, int k, i64 n, bool use_a)
{
    check_exact_divisor(N, ell);
    if (k < 2 || k % 2 != 0) throw invalid_input("Atkin-Lehner traces need even weight k >= 2");
    Rational s = 0;
    const i64 m = n * ell;
    for (i64 a : divisors(m)) {
        i64 d = m / a;
        s += phi_ell(N, ell, a, d) * Rational(ipow(Int(use_a ? a : d), k - 1));
    }
    if (k == 2) s -= Rational(sigma1_N(N, n));
    return s;
}

} // namespace detail

// trace of [Delta_n] on E_k(N, chi)
inline CycloNum eisenstein_trace(i64 N, const DirichletChar& chi, int k, i64 n)
{
    return detail::eis_sum(N, chi, k, n, true);
}

inline CycloNum coboundary_trace(i64 N, const DirichletChar& chi, int k, i64 n)
{
    return detail::eis_sum(N, chi, k, n, false);
}

// trace of [Delta_n Theta_ell] on E_k(N); no ell^{w/2} normalization
inline Rational eisenstein_trace_ell(i64 N, i64 ell, int k, i64 n) { return detail::eis_sum_ell(N, ell, k, n, true); }

inline Rational coboundary_trace_ell(i64 N, i64 ell, int k, i64 n)
{
    return detail::eis_sum_ell(N, ell, k, n, false);
}

} // namespace tracekit
