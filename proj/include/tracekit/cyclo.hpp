#pragma once

#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <ostream>
#include <string>
#include <vector>

#include "tracekit/arith.hpp"

namespace tracekit {

namespace poly {

using Poly = std::vector<Rational>; // low degree first

inline void trim(Poly& p)
{
    while (!p.empty() && sgn(p.back()) == 0) p.pop_back();
}

// remainder of a modulo a monic polynomial f
inline Poly rem_monic(Poly a, const Poly& f)
{
    const size_t df = f.size() - 1;
    for (size_t i = a.size(); i-- > df;) {
        if (sgn(a[i]) == 0) continue;
        Rational q = a[i];
        for (size_t j = 0; j <= df; ++j) a[i - df + j] -= q * f[j];
    }
    a.resize(std::min(a.size(), df));
    return a;
}

inline Poly mul(const Poly& a, const Poly& b)
{
    if (a.empty() || b.empty()) return {};
    Poly r(a.size() + b.size() - 1, Rational(0));
    for (size_t i = 0; i < a.size(); ++i) {
        if (sgn(a[i]) == 0) continue;
        for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    }
    return r;
}

// quotient and remainder for general nonzero divisor b
inline std::pair<Poly, Poly> divmod(Poly a, Poly b)
{
    trim(a);
    trim(b);
    if (b.empty()) throw invalid_input("polynomial division by zero");
    if (a.size() < b.size()) return {{}, a};
    Poly q(a.size() - b.size() + 1, Rational(0));
    for (size_t k = q.size(); k-- > 0;) {
        Rational c = a[k + b.size() - 1] / b.back();
        q[k] = c;
        for (size_t j = 0; j < b.size(); ++j) a[k + j] -= c * b[j];
    }
    a.resize(b.size() - 1);
    trim(a);
    return {q, a};
}

inline Poly sub(const Poly& a, const Poly& b)
{
    Poly r(std::max(a.size(), b.size()), Rational(0));
    for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
    trim(r);
    return r;
}

} // namespace poly

namespace detail {

struct CycloTables {
    poly::Poly phi;                 // monic cyclotomic polynomial
    std::vector<poly::Poly> powers; // x^e mod phi for 0 <= e < m, each of length deg
};

inline std::shared_ptr<const CycloTables> cyclo_tables(int m)
{
    thread_local int last_m = 0;
    thread_local std::shared_ptr<const CycloTables> last;
    if (m == last_m) return last;
    static std::mutex mu;
    static std::map<int, std::shared_ptr<const CycloTables>> memo;
    {
        std::lock_guard<std::mutex> lk(mu);
        auto it = memo.find(m);
        if (it != memo.end()) {
            last_m = m;
            last = it->second;
            return last;
        }
    }
    // Phi_m = (x^m - 1) / prod_{d|m, d<m} Phi_d
    poly::Poly num(m + 1, Rational(0));
    num[0] = -1;
    num[m] = 1;
    for (i64 d : divisors(m)) {
        if (d == m) continue;
        num = poly::divmod(num, cyclo_tables(static_cast<int>(d))->phi).first;
    }
    auto t = std::make_shared<CycloTables>();
    t->phi = num;
    const size_t deg = num.size() - 1;
    for (int e = 0; e < m; ++e) {
        poly::Poly xe(e + 1, Rational(0));
        xe[e] = 1;
        xe = poly::rem_monic(xe, t->phi);
        xe.resize(deg, Rational(0));
        t->powers.push_back(xe);
    }
    std::lock_guard<std::mutex> lk(mu);
    memo.emplace(m, t);
    return t;
}

} // namespace detail

// Element of Q(zeta_m), stored as coefficients in the power basis of degree < phi(m).
class CycloNum {
public:
    CycloNum() : m_(1), c_{Rational(0)} {}
    CycloNum(const Rational& r) : m_(1), c_{r} {}
    CycloNum(long v) : m_(1), c_{Rational(v)} {}
    CycloNum(const Int& v) : m_(1), c_{Rational(v)} {}

    static CycloNum from_coeffs(int m, std::vector<Rational> c)
    {
        CycloNum z;
        auto t = detail::cyclo_tables(m);
        const size_t deg = t->phi.size() - 1;
        if (c.size() > deg) c = poly::rem_monic(std::move(c), t->phi);
        c.resize(deg, Rational(0));
        z.m_ = m == 2 ? 1 : m; // Q(zeta_2) = Q
        z.c_ = std::move(c);
        return z;
    }

    static CycloNum zeta(int m, i64 e)
    {
        if (m < 1) throw invalid_input("zeta: order must be positive");
        e = mod(e, m);
        if (m <= 2) return CycloNum(Rational(e == 0 ? 1 : -1));
        auto t = detail::cyclo_tables(m);
        CycloNum z;
        z.m_ = m;
        z.c_ = t->powers[e];
        return z;
    }

    int order() const { return m_; }
    const std::vector<Rational>& coeffs() const { return c_; }

    bool is_zero() const
    {
        for (auto& x : c_)
            if (sgn(x) != 0) return false;
        return true;
    }

    bool is_rational() const
    {
        for (size_t i = 1; i < c_.size(); ++i)
            if (sgn(c_[i]) != 0) return false;
        return true;
    }

    Rational rational_value() const
    {
        if (!is_rational()) throw invalid_input("cyclotomic number is not rational");
        return c_[0];
    }

    // re-express in Q(zeta_L) for m | L
    CycloNum lifted(int L) const
    {
        if (L == m_) return *this;
        if (L % m_ != 0) throw invalid_input("lift order must be a multiple");
        if (L <= 2) return *this;
        auto t = detail::cyclo_tables(L);
        const int step = L / m_;
        std::vector<Rational> out(t->phi.size() - 1, Rational(0));
        for (size_t i = 0; i < c_.size(); ++i) {
            if (sgn(c_[i]) == 0) continue;
            const auto& p = t->powers[(i * step) % L];
            for (size_t j = 0; j < out.size(); ++j)
                if (sgn(p[j]) != 0) out[j] += c_[i] * p[j];
        }
        CycloNum z;
        z.m_ = L;
        z.c_ = std::move(out);
        return z;
    }

    CycloNum& operator+=(const CycloNum& o)
    {
        if (o.m_ != m_) return *this = add_lifted(*this, o, 1);
        for (size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
        return *this;
    }

    CycloNum& operator-=(const CycloNum& o)
    {
        if (o.m_ != m_) return *this = add_lifted(*this, o, -1);
        for (size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
        return *this;
    }

    CycloNum& operator*=(const Rational& r)
    {
        for (auto& x : c_) x *= r;
        return *this;
    }

    friend CycloNum operator+(CycloNum a, const CycloNum& b) { return a += b; }
    friend CycloNum operator-(CycloNum a, const CycloNum& b) { return a -= b; }
    friend CycloNum operator*(CycloNum a, const Rational& r) { return a *= r; }
    friend CycloNum operator*(const Rational& r, CycloNum a) { return a *= r; }

    CycloNum operator-() const
    {
        CycloNum z = *this;
        for (auto& x : z.c_) x = -x;
        return z;
    }

    friend CycloNum operator*(const CycloNum& a, const CycloNum& b)
    {
        if (a.m_ != b.m_) {
            int L = static_cast<int>(lcm64(a.m_, b.m_));
            return a.lifted(L) * b.lifted(L);
        }
        if (a.m_ == 1) return CycloNum(a.c_[0] * b.c_[0]);
        return from_coeffs(a.m_, poly::mul(a.c_, b.c_));
    }

    CycloNum& operator*=(const CycloNum& o) { return *this = *this * o; }

    CycloNum inverse() const
    {
        if (is_zero()) throw invalid_input("division by zero in cyclotomic field");
        if (m_ == 1) return CycloNum(1 / c_[0]);
        // extended Euclid: s*a + t*phi = g (constant)
        auto tab = detail::cyclo_tables(m_);
        poly::Poly r0 = tab->phi, r1 = c_, s0{}, s1{Rational(1)};
        poly::trim(r1);
        while (r1.size() > 1) {
            auto [q, r] = poly::divmod(r0, r1);
            poly::Poly s = poly::sub(s0, poly::mul(q, s1));
            r0 = std::move(r1);
            r1 = std::move(r);
            s0 = std::move(s1);
            s1 = std::move(s);
        }
        // r1 is a nonzero constant since phi is irreducible
        Rational g = r1[0];
        for (auto& x : s1) x /= g;
        return from_coeffs(m_, s1);
    }

    friend CycloNum operator/(const CycloNum& a, const CycloNum& b) { return a * b.inverse(); }

    friend bool operator==(const CycloNum& a, const CycloNum& b)
    {
        if (a.m_ != b.m_) {
            int L = static_cast<int>(lcm64(a.m_, b.m_));
            return a.lifted(L).c_ == b.lifted(L).c_;
        }
        return a.c_ == b.c_;
    }
    friend bool operator!=(const CycloNum& a, const CycloNum& b) { return !(a == b); }

    std::complex<double> approx() const
    {
        std::complex<double> z = 0, p = 1;
        const std::complex<double> zeta = std::polar(1.0, 2 * std::numbers::pi / m_);
        for (auto& x : c_) {
            z += x.get_d() * p;
            p *= zeta;
        }
        return z;
    }

    std::string to_string() const
    {
        if (is_rational()) return tracekit::to_string(c_[0]);
        std::string s;
        for (size_t i = 0; i < c_.size(); ++i) {
            if (sgn(c_[i]) == 0) continue;
            std::string term = tracekit::to_string(c_[i]);
            if (i > 0) term = "(" + term + ")*z" + std::to_string(m_) + (i > 1 ? "^" + std::to_string(i) : "");
            s += (s.empty() ? "" : " + ") + term;
        }
        return s;
    }

private:
    static CycloNum add_lifted(const CycloNum& a, const CycloNum& b, int sign)
    {
        int L = static_cast<int>(lcm64(a.m_, b.m_));
        CycloNum x = a.lifted(L), y = b.lifted(L);
        for (size_t i = 0; i < x.c_.size(); ++i) {
            if (sign > 0)
                x.c_[i] += y.c_[i];
            else
                x.c_[i] -= y.c_[i];
        }
        return x;
    }

    int m_;
    std::vector<Rational> c_;
};

inline std::ostream& operator<<(std::ostream& os, const CycloNum& z) { return os << z.to_string(); }

inline CycloNum embed_rational(const Rational& r) { return CycloNum(r); }

} // namespace tracekit
