#pragma once

#include <algorithm>
#include <cmath>
#include <mutex>
#include <optional>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include "tracekit/numeric.hpp"

namespace tracekit {

struct Factored {
    std::vector<std::pair<i64, int>> pf;

    i64 value() const
    {
        i64 v = 1;
        for (auto [p, e] : pf)
            for (int i = 0; i < e; ++i) v *= p;
        return v;
    }
};

namespace detail {

inline Factored factor_uncached(i64 n)
{
    Factored f;
    auto strip = [&](i64 p) {
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        if (e) f.pf.emplace_back(p, e);
    };
    strip(2);
    strip(3);
    strip(5);
    // wheel mod 30
    static const int step[8] = {4, 2, 4, 2, 4, 6, 2, 6};
    i64 p = 7;
    int k = 0;
    while (p * p <= n) {
        strip(p);
        p += step[k];
        k = (k + 1) & 7;
    }
    if (n > 1) f.pf.emplace_back(n, 1);
    return f;
}

} // namespace detail

// Trial division; intended for n up to about 10^12.
inline Factored factor(i64 n)
{
    if (n < 1) throw invalid_input("factor: n must be positive");
    if (n < 64) return detail::factor_uncached(n);
    static std::mutex mu;
    static std::unordered_map<i64, Factored> memo;
    {
        std::lock_guard<std::mutex> lk(mu);
        auto it = memo.find(n);
        if (it != memo.end()) return it->second;
    }
    Factored f = detail::factor_uncached(n);
    std::lock_guard<std::mutex> lk(mu);
    memo.emplace(n, f);
    return f;
}

inline std::vector<i64> divisors(i64 n)
{
    std::vector<i64> ds{1};
    for (auto [p, e] : factor(n).pf) {
        size_t cur = ds.size();
        i64 pk = 1;
        for (int i = 1; i <= e; ++i) {
            pk *= p;
            for (size_t j = 0; j < cur; ++j) ds.push_back(ds[j] * pk);
        }
    }
    std::sort(ds.begin(), ds.end());
    return ds;
}

inline int moebius(i64 n)
{
    if (n == 0) return 1; // convention used by the primed inversion sums
    int m = 1;
    for (auto [p, e] : factor(n).pf) {
        if (e > 1) return 0;
        m = -m;
    }
    return m;
}

inline i64 euler_phi(i64 n)
{
    i64 r = n;
    for (auto [p, e] : factor(n).pf) r = r / p * (p - 1);
    return r;
}

inline i64 gcd64(i64 a, i64 b)
{
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b) {
        i64 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

inline i64 lcm64(i64 a, i64 b) { return a / gcd64(a, b) * b; }

inline i64 mod(i64 a, i64 m)
{
    i64 r = a % m;
    return r < 0 ? r + m : r;
}

inline i64 mulmod(i64 a, i64 b, i64 m)
{
    return static_cast<i64>(static_cast<__int128>(mod(a, m)) * mod(b, m) % m);
}

inline i64 powmod(i64 b, i64 e, i64 m)
{
    i64 r = 1 % m;
    b = mod(b, m);
    while (e > 0) {
        if (e & 1) r = mulmod(r, b, m);
        b = mulmod(b, b, m);
        e >>= 1;
    }
    return r;
}

inline i64 isqrt64(i64 n)
{
    if (n < 0) throw invalid_input("isqrt64 of negative integer");
    i64 r = static_cast<i64>(std::sqrt(static_cast<long double>(n)));
    while (r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

inline bool is_square64(i64 n, i64* root = nullptr)
{
    if (n < 0) return false;
    i64 r = isqrt64(n);
    if (r * r != n) return false;
    if (root) *root = r;
    return true;
}

// v_p(n) for n != 0
inline int valuation(i64 n, i64 p)
{
    if (n == 0) throw invalid_input("valuation of zero");
    int v = 0;
    while (n % p == 0) {
        n /= p;
        ++v;
    }
    return v;
}

// returns (g, x, y) with a x + b y = g >= 0
inline std::tuple<i64, i64, i64> ext_gcd(i64 a, i64 b)
{
    i64 x0 = 1, y0 = 0, x1 = 0, y1 = 1;
    while (b != 0) {
        i64 q = a / b;
        std::tie(a, b) = std::make_pair(b, a - q * b);
        std::tie(x0, x1) = std::make_pair(x1, x0 - q * x1);
        std::tie(y0, y1) = std::make_pair(y1, y0 - q * y1);
    }
    if (a < 0) return {-a, -x0, -y0};
    return {a, x0, y0};
}

inline i64 inv_mod(i64 a, i64 m)
{
    if (m == 1) return 0;
    auto [g, x, y] = ext_gcd(mod(a, m), m);
    (void)y;
    if (g != 1) throw invalid_input("inv_mod: not invertible");
    return mod(x, m);
}

inline Int gegenbauer(int w, const Int& t, const Int& n)
{
    if (w < 0) throw invalid_input("gegenbauer: negative index");
    Int prev = 0, cur = 1;
    for (int i = 1; i <= w; ++i) {
        Int next = t * cur - n * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

inline Int sigma1_N(i64 N, i64 n)
{
    Int s = 0;
    for (i64 d : divisors(n))
        if (gcd64(d, N) == 1) s += n / d;
    return s;
}

inline Int sigma1(i64 n) { return sigma1_N(1, n); }

inline i64 index_phi1(i64 N)
{
    i64 r = N;
    for (auto [p, e] : factor(N).pf) r = r / p * (p + 1);
    return r;
}

// Simultaneous congruences with arbitrary moduli; none when inconsistent.
inline std::optional<std::pair<i64, i64>> crt_solve(const std::vector<std::pair<i64, i64>>& congruences)
{
    i64 r = 0, m = 1;
    for (auto [v, mm] : congruences) {
        if (mm < 1) throw invalid_input("crt_solve: modulus must be positive");
        i64 v2 = mod(v, mm);
        auto [g, x, y] = ext_gcd(m, mm);
        (void)y;
        if ((v2 - r) % g != 0) return std::nullopt;
        i64 m2 = mm / g;
        i64 k = mulmod((v2 - r) / g, x, m2);
        i64 L = m * m2;
        r = mod(r + static_cast<i64>(static_cast<__int128>(m) * k % L), L);
        m = L;
    }
    return std::make_pair(r, m);
}

// Kronecker symbol (a|n) for n >= 1
inline int kronecker(i64 a, i64 n)
{
    if (n < 1) throw invalid_input("kronecker: n must be positive");
    int s = 1;
    while (n % 2 == 0) {
        n /= 2;
        if (a % 2 == 0) return 0;
        i64 r = mod(a, 8);
        if (r == 3 || r == 5) s = -s;
    }
    // Jacobi symbol for odd n
    a = mod(a, n);
    while (a != 0) {
        while (a % 2 == 0) {
            a /= 2;
            i64 r = n % 8;
            if (r == 3 || r == 5) s = -s;
        }
        std::swap(a, n);
        if (a % 4 == 3 && n % 4 == 3) s = -s;
        a %= n;
    }
    return n == 1 ? s : 0;
}

inline int legendre(i64 a, i64 p) { return kronecker(a, p); }

// the nontrivial character mod 4
inline int eps4(i64 x)
{
    i64 r = mod(x, 4);
    return r == 1 ? 1 : (r == 3 ? -1 : 0);
}

} // namespace tracekit
