#pragma once

#include <array>
#include <cstdlib>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "tracekit/matrix_forms.hpp"

namespace tracekit {

// Finitely supported map from PGL-canonical matrices to rationals.
class GroupRingElem {
public:
    using Map = std::map<ProjMat, Rational>;

    GroupRingElem() = default;

    static GroupRingElem single(const IntMat2& m, const Rational& c = 1)
    {
        GroupRingElem x;
        x.add(m, c);
        return x;
    }

    void add(const IntMat2& m, const Rational& c) { add(ProjMat(m), c); }

    void add(const ProjMat& p, const Rational& c)
    {
        if (sgn(c) == 0) return;
        auto [it, ins] = c_.emplace(p, c);
        if (!ins) {
            it->second += c;
            if (sgn(it->second) == 0) c_.erase(it);
        }
    }

    Rational coeff(const IntMat2& m) const
    {
        auto it = c_.find(ProjMat(m));
        return it == c_.end() ? Rational(0) : it->second;
    }

    const Map& terms() const { return c_; }
    size_t size() const { return c_.size(); }
    bool is_zero() const { return c_.empty(); }

    GroupRingElem& operator+=(const GroupRingElem& o)
    {
        for (auto& [p, c] : o.c_) add(p, c);
        return *this;
    }
    GroupRingElem& operator-=(const GroupRingElem& o)
    {
        for (auto& [p, c] : o.c_) add(p, -c);
        return *this;
    }
    GroupRingElem& operator*=(const Rational& r)
    {
        if (sgn(r) == 0) {
            c_.clear();
            return *this;
        }
        for (auto& [p, c] : c_) c *= r;
        return *this;
    }

    friend GroupRingElem operator+(GroupRingElem a, const GroupRingElem& b) { return a += b; }
    friend GroupRingElem operator-(GroupRingElem a, const GroupRingElem& b) { return a -= b; }
    friend GroupRingElem operator*(GroupRingElem a, const Rational& r) { return a *= r; }
    friend GroupRingElem operator*(const Rational& r, GroupRingElem a) { return a *= r; }

    friend GroupRingElem operator*(const GroupRingElem& a, const GroupRingElem& b)
    {
        GroupRingElem r;
        for (auto& [p, x] : a.c_)
            for (auto& [q, y] : b.c_) r.add(p.mat() * q.mat(), x * y);
        return r;
    }

    GroupRingElem left(const IntMat2& g) const
    {
        GroupRingElem r;
        for (auto& [p, c] : c_) r.add(g * p.mat(), c);
        return r;
    }

    GroupRingElem right(const IntMat2& g) const
    {
        GroupRingElem r;
        for (auto& [p, c] : c_) r.add(p.mat() * g, c);
        return r;
    }

    bool operator==(const GroupRingElem& o) const { return c_ == o.c_; }
    bool operator!=(const GroupRingElem& o) const { return !(*this == o); }

    // JSON array of {a,b,c,d,num,den}, lexicographic in (a,b,c,d)
    std::string to_json() const
    {
        std::ostringstream os;
        os << "[";
        bool first = true;
        for (auto& [p, c] : c_) {
            const auto& m = p.mat();
            os << (first ? "" : ",") << "{\"a\":" << m.a << ",\"b\":" << m.b << ",\"c\":" << m.c << ",\"d\":" << m.d
               << ",\"num\":" << c.get_num() << ",\"den\":" << c.get_den() << "}";
            first = false;
        }
        os << "]";
        return os.str();
    }

private:
    Map c_;
};

namespace gens {
inline IntMat2 U2() { return {0, -1, 1, -1}; }
} // namespace gens

inline GroupRingElem one_plus_S() { return GroupRingElem::single(gens::I()) + GroupRingElem::single(gens::S()); }
inline GroupRingElem one_minus_S() { return GroupRingElem::single(gens::I()) - GroupRingElem::single(gens::S()); }
inline GroupRingElem one_minus_T() { return GroupRingElem::single(gens::I()) - GroupRingElem::single(gens::T()); }
inline GroupRingElem one_plus_U_U2()
{
    return GroupRingElem::single(gens::I()) + GroupRingElem::single(gens::U()) + GroupRingElem::single(gens::U2());
}

// The families of the explicit operator, as predicates on integer matrices of determinant n.
namespace family {

struct M4 {
    i64 a, b, c, d;
};

inline i64 det(const M4& m) { return m.a * m.d - m.b * m.c; }

// positive definite Q_M, fixed point in the closed domain, boundary rules applied
inline bool in_E(const M4& m)
{
    const i64 e = m.a - m.d, f = -m.b, c = m.c, t = m.a + m.d;
    if (c <= 0) return false;
    if (t * t - 4 * det(m) >= 0) return false;
    if (e < 0 || e > c || f < e) return false;
    if (e == 0 && f > c && !(t > 0)) return false;
    if (e == 0 && f < c && !(t <= 0)) return false;
    if (e == c && f > c && !(t <= 0)) return false;
    if (f == e && f < c && !(t > 0)) return false;
    return true;
}

inline bool in_upper(const M4& m) { return m.c == 0 && m.a > 0 && 0 <= m.b && m.b < m.d - m.a; }

inline bool in_X(const M4& m) { return 0 < -m.b && -m.b < m.c && 0 < m.d && m.d < m.a; }

inline bool in_Y(const M4& m) { return m.a - m.d < -m.b && -m.b <= m.c && 0 < m.c && m.c < m.a; }

inline bool in_Z(const M4& m)
{
    if (!(m.a - m.d <= m.c && m.c < -m.b && 0 < m.a && 0 < m.c)) return false;
    if (m.a - m.d == m.c && !(-m.d >= m.a)) return false;
    return true;
}

// the five sums of the simplified form
inline bool in_F1(const M4& m) { return m.a - m.d < -m.b && -m.b <= m.c && 0 <= m.c && m.c < m.a; }
inline bool in_F2(const M4& m) { return -m.b <= m.a - m.d && m.a - m.d < m.c && 0 <= -m.d && -m.d < -m.b; }
inline bool in_F3(const M4& m) { return 0 < m.a - m.d && m.a - m.d <= m.c && m.c < -m.b && m.a <= 0; }
inline bool in_F4(const M4& m) { return 0 <= m.a - m.d && m.a - m.d < -m.b && -m.b < m.c && m.d <= 0; }
inline bool in_F5(const M4& m) { return 0 <= m.a - m.d && m.a - m.d <= -m.b && -m.b == m.c; }

// weight inside the primed fifth sum
inline Rational F5_weight(const M4& m)
{
    const i64 e = m.a - m.d, c = m.c;
    if (e == 0 && c == 0) return Rational(-1, 12);
    if (e == 0) return Rational(1, 2);
    if (e == c) return Rational(1, 3);
    return 1;
}

using Sink = std::function<void(const M4&)>;

inline void enum_E(i64 n, const Sink& out)
{
    for (i64 t = -isqrt64(4 * n - 1); t * t < 4 * n; ++t) {
        const i64 D = 4 * n - t * t;
        for (i64 e = mod(t, 2); 3 * e * e <= D; e += 2) {
            if ((D + e * e) % 4 != 0) continue;
            const i64 P = (D + e * e) / 4; // c * f
            for (i64 c : divisors(P)) {
                M4 m{(t + e) / 2, -(P / c), c, (t - e) / 2};
                if (in_E(m)) out(m);
            }
        }
    }
}

inline void enum_upper(i64 n, const Sink& out)
{
    for (i64 a : divisors(n))
        for (i64 b = 0; b < n / a - a; ++b) out({a, b, 0, n / a});
}

inline void enum_X(i64 n, const Sink& out)
{
    // a d + |b| c = n, all positive
    for (i64 ad = 1; ad < n; ++ad) {
        const i64 r = n - ad;
        for (i64 d : divisors(ad))
            for (i64 f : divisors(r)) {
                M4 m{ad / d, -f, r / f, d};
                if (in_X(m)) out(m);
            }
    }
}

inline void enum_Y(i64 n, const Sink& out)
{
    for (i64 a = 1; a <= n; ++a) {
        for (i64 c = 1; c < a; ++c) {
            // b >= 0 forces a^2 < n and b < (n - a^2)/(a - c)
            if (a * a < n)
                for (i64 b = 0; b * (a - c) < n - a * a; ++b) {
                    if ((n + b * c) % a != 0) continue;
                    M4 m{a, b, c, (n + b * c) / a};
                    if (in_Y(m)) out(m);
                }
            // b < 0: a d = n - |b| c > 0
            for (i64 f = 1; f <= c && f * c < n; ++f) {
                if ((n - f * c) % a != 0) continue;
                M4 m{a, -f, c, (n - f * c) / a};
                if (in_Y(m)) out(m);
            }
        }
    }
}

// all (x, y) with x y = P, x >= 1
inline void factor_pairs(i64 P, const std::function<void(i64, i64)>& f)
{
    if (P == 0) return;
    const i64 A = P < 0 ? -P : P;
    for (i64 x : divisors(A)) f(x, P / x);
}

inline void enum_Z(i64 n, const Sink& out)
{
    for (i64 c = 1; 3 * c * c < 4 * n + 3 * c; ++c) {
        for (i64 f = c + 1; 4 * f * c <= 4 * n + c * c; ++f) {
            const i64 P = n - f * c;
            if (P == 0) {
                for (i64 a = 1; a <= c; ++a) {
                    M4 m{a, -f, c, 0};
                    if (in_Z(m)) out(m);
                }
                continue;
            }
            factor_pairs(P, [&](i64 a, i64 d) {
                M4 m{a, -f, c, d};
                if (in_Z(m)) out(m);
            });
        }
    }
}

inline void enum_F1(i64 n, const Sink& out)
{
    enum_upper(n, out);
    enum_Y(n, out);
}

inline void enum_F2(i64 n, const Sink& out)
{
    // n = f c - a g with f = -b > g = -d >= 0, c > a + g >= f
    for (i64 f = 1; f <= n; ++f)
        for (i64 g = 0; g < f && f * g < n; ++g)
            for (i64 a = std::max<i64>(1, f - g); a * (f - g) < n - f * g; ++a) {
                if ((n + a * g) % f != 0) continue;
                M4 m{a, -f, (n + a * g) / f, -g};
                if (in_F2(m)) out(m);
            }
}

inline void enum_F3(i64 n, const Sink& out)
{
    for (i64 c = 1; c * c < n; ++c)
        for (i64 f = c + 1; f * c <= n; ++f) {
            const i64 P = n - f * c;
            if (P == 0) {
                for (i64 d = -c; d < 0; ++d) {
                    M4 m{0, -f, c, d};
                    if (in_F3(m)) out(m);
                }
                continue;
            }
            factor_pairs(P, [&](i64 x, i64 y) {
                M4 m{-x, -f, c, -y};
                if (in_F3(m)) out(m);
            });
        }
}

// d <= 0 and 0 <= e = a - d < bound with a d = P
inline void solve_ad(i64 P, i64 emax, const std::function<void(i64, i64)>& f)
{
    for (i64 e = 0; e <= emax; ++e) {
        const i64 disc = e * e + 4 * P;
        i64 r;
        if (!is_square64(disc, &r)) continue;
        for (i64 s : {-r, r}) {
            if ((s - e) % 2 != 0) continue;
            const i64 d = (s - e) / 2;
            f(d + e, d);
            if (r == 0) break;
        }
    }
}

inline void enum_F4(i64 n, const Sink& out)
{
    for (i64 f = 1; 3 * f * f < 4 * n; ++f)
        for (i64 c = f + 1; 4 * f * c < 4 * n + f * f; ++c)
            solve_ad(n - f * c, f - 1, [&](i64 a, i64 d) {
                M4 m{a, -f, c, d};
                if (in_F4(m)) out(m);
            });
}

inline void enum_F5(i64 n, const Sink& out)
{
    i64 s;
    if (is_square64(n, &s)) {
        out({s, 0, 0, s});
        out({-s, 0, 0, -s});
    }
    // a d >= -c^2/4 gives 3c^2 <= 4n
    for (i64 c = 1; 3 * c * c <= 4 * n; ++c)
        solve_ad(n - c * c, c, [&](i64 a, i64 d) {
            M4 m{a, -c, c, d};
            if (in_F5(m)) out(m);
        });
}

inline IntMat2 to_mat(const M4& m) { return {Int(m.a), Int(m.b), Int(m.c), Int(m.d)}; }

} // namespace family

// T_n^infty: upper triangular (a b; 0 d), ad = n, 0 <= b < d
inline GroupRingElem build_Tn_infty(i64 n)
{
    if (n < 1) throw invalid_input("n must be positive");
    GroupRingElem r;
    for (i64 a : divisors(n))
        for (i64 b = 0; b < n / a; ++b) r.add(IntMat2(a, b, 0, n / a), 1);
    return r;
}

inline std::vector<std::pair<ProjMat, Rational>> build_elliptic_reps(i64 n)
{
    if (n < 1) throw invalid_input("n must be positive");
    std::vector<std::pair<ProjMat, Rational>> out;
    family::enum_E(n, [&](const family::M4& m) {
        IntMat2 M = family::to_mat(m);
        out.emplace_back(ProjMat(M), Rational(-1) / *stab_order(M));
    });
    return out;
}

enum class TnVariant { eq81, eq9 };

inline GroupRingElem build_Tn(i64 n, TnVariant v = TnVariant::eq81)
{
    if (n < 1) throw invalid_input("n must be positive");
    using namespace family;
    GroupRingElem r;
    auto add = [&](const Rational& c) { return [&r, c](const M4& m) { r.add(to_mat(m), c); }; };
    if (v == TnVariant::eq81) {
        for (auto& [p, c] : build_elliptic_reps(n)) r.add(p, c);
        enum_upper(n, add(1));
        i64 s;
        if (is_square64(n, &s)) r.add(IntMat2(s, 0, 0, s), Rational(1, 6));
        const IntMat2 S = gens::S(), U = gens::U(), U2 = gens::U2();
        enum_X(n, [&](const M4& m) {
            IntMat2 M = to_mat(m);
            r.add(M, 1);
            r.add(S * M * S, -1);
        });
        auto yz = [&](const M4& m) {
            IntMat2 M = to_mat(m);
            r.add(M, 1);
            r.add(U2 * M * U, -1);
        };
        enum_Y(n, yz);
        enum_Z(n, yz);
        return r;
    }
    enum_F1(n, add(1));
    enum_F2(n, add(-1));
    enum_F3(n, add(-1));
    enum_F4(n, add(-1));
    enum_F5(n, [&](const M4& m) { r.add(to_mat(m), -F5_weight(m)); });
    return r;
}

// Orbit keys for the left actions of <T>, <S>, <U> on PGL-canonical matrices.
enum class IdealKind { oneMinusT, onePlusS, onePlusUUU };

inline const char* ideal_name(IdealKind k)
{
    switch (k) {
    case IdealKind::oneMinusT: return "(1-T)R";
    case IdealKind::onePlusS: return "(1+S)R";
    default: return "(1+U+U^2)R";
    }
}

namespace detail {

inline IntMat2 t_orbit_rep(const IntMat2& m)
{
    // T^k m = (a + k c, b + k d; c, d)
    if (sgn(m.c) != 0) {
        Int k = fdiv(m.a, abs(m.c));
        if (sgn(m.c) < 0) k = -k;
        // a - k c lands in [0, |c|)
        return {m.a - k * m.c, m.b - k * m.d, m.c, m.d};
    }
    Int k = fdiv(m.b, abs(m.d));
    if (sgn(m.d) < 0) k = -k;
    return {m.a - k * m.c, m.b - k * m.d, m.c, m.d};
}

} // namespace detail

inline ProjMat orbit_key(const ProjMat& p, IdealKind kind)
{
    const IntMat2& m = p.mat();
    switch (kind) {
    case IdealKind::oneMinusT: {
        IntMat2 r1 = detail::t_orbit_rep(m), r2 = detail::t_orbit_rep(-m);
        // both lifts, then the smaller of the two raw representatives
        return ProjMat(r2 < r1 ? r2 : r1);
    }
    case IdealKind::onePlusS: {
        ProjMat q(gens::S() * m);
        return q < p ? q : p;
    }
    default: {
        ProjMat q1(gens::U() * m), q2(gens::U2() * m);
        ProjMat best = p;
        if (q1 < best) best = q1;
        if (q2 < best) best = q2;
        return best;
    }
    }
}

struct MembershipResult {
    bool member = true;
    std::optional<ProjMat> witness;
    std::string detail;
};

inline MembershipResult ideal_membership(const GroupRingElem& x, IdealKind kind)
{
    MembershipResult res;
    if (kind == IdealKind::oneMinusT) {
        std::map<ProjMat, Rational> sums;
        for (auto& [p, c] : x.terms()) sums[orbit_key(p, kind)] += c;
        for (auto& [k, s] : sums)
            if (sgn(s) != 0) {
                res.member = false;
                res.witness = k;
                res.detail = "orbit sum " + to_string(s);
                return res;
            }
        return res;
    }
    const size_t orbit = kind == IdealKind::onePlusS ? 2 : 3;
    std::map<ProjMat, std::vector<Rational>> vals;
    for (auto& [p, c] : x.terms()) vals[orbit_key(p, kind)].push_back(c);
    for (auto& [k, v] : vals) {
        bool ok = v.size() == orbit;
        for (size_t i = 1; ok && i < v.size(); ++i) ok = v[i] == v[0];
        if (!ok) {
            res.member = false;
            res.witness = k;
            res.detail = "coefficients not constant on orbit";
            return res;
        }
    }
    return res;
}

struct ClassLedgerEntry {
    ClassLabel label;
    IntMat2 rep;
    Rational coeff_sum;
    Rational eps;
};

struct ABCReport {
    i64 n = 0;
    bool A = false, B = false, C = false;
    std::vector<std::string> witnesses;
    std::vector<ClassLedgerEntry> ledger;

    bool all() const { return A && B && C; }
};

// classes of M_n with nonzero epsilon, found by a scan with |entries| <= bound
inline std::map<ClassLabel, IntMat2> nonzero_eps_classes(i64 n, i64 bound)
{
    std::map<ClassLabel, IntMat2> out;
    auto visit = [&](i64 a, i64 b, i64 c, i64 d) {
        IntMat2 M(a, b, c, d);
        if (sgn(epsilon(M)) == 0) return;
        ClassLabel l = class_label(M);
        out.emplace(l, M);
    };
    for (i64 c = 0; c <= bound; ++c)
        for (i64 a = -bound; a <= bound; ++a)
            for (i64 d = -bound; d <= bound; ++d) {
                const i64 r = a * d - n; // = b c
                if (c == 0) {
                    if (r != 0) continue;
                    for (i64 b = -bound; b <= bound; ++b) visit(a, b, 0, d);
                } else if (r % c == 0 && std::abs(r / c) <= bound) {
                    visit(a, r / c, c, d);
                }
            }
    return out;
}

inline ABCReport verify_ABC(i64 n, const GroupRingElem& Tn)
{
    ABCReport rep;
    rep.n = n;
    const GroupRingElem Tinf = build_Tn_infty(n);
    const IntMat2 S = gens::S();

    GroupRingElem a = Tn.left(S);
    a = Tn - a - (Tinf - Tinf.right(S));
    auto mA = ideal_membership(a, IdealKind::oneMinusT);
    rep.A = mA.member;
    if (!mA.member) {
        std::ostringstream os;
        os << "A: " << mA.witness->mat() << " " << mA.detail;
        rep.witnesses.push_back(os.str());
    }

    auto mB1 = ideal_membership(Tn * one_plus_S(), IdealKind::onePlusUUU);
    auto mB2 = ideal_membership(Tn * one_plus_U_U2(), IdealKind::onePlusS);
    rep.B = mB1.member && mB2.member;
    for (auto* m : {&mB1, &mB2})
        if (!m->member) {
            std::ostringstream os;
            os << "B: " << m->witness->mat() << " " << m->detail;
            rep.witnesses.push_back(os.str());
        }

    std::map<ClassLabel, std::pair<IntMat2, Rational>> sums;
    for (auto& [p, c] : Tn.terms()) {
        if (p.mat().det() != n) {
            rep.witnesses.push_back("C: support element of wrong determinant");
            return rep;
        }
        auto [it, ins] = sums.emplace(class_label(p.mat()), std::make_pair(p.mat(), c));
        if (!ins) it->second.second += c;
    }
    rep.C = true;
    for (auto& [l, v] : sums) {
        Rational e = epsilon(v.first);
        rep.ledger.push_back({l, v.first, v.second, e});
        if (v.second != e) {
            rep.C = false;
            std::ostringstream os;
            os << "C: class " << l << " sum " << to_string(v.second) << " expected " << to_string(e);
            rep.witnesses.push_back(os.str());
        }
    }
    for (auto& [l, M] : nonzero_eps_classes(n, n + 2)) {
        if (sums.count(l)) continue;
        rep.C = false;
        std::ostringstream os;
        os << "C: class " << l << " missing, epsilon " << to_string(epsilon(M));
        rep.witnesses.push_back(os.str());
    }
    return rep;
}

inline ABCReport verify_ABC(i64 n) { return verify_ABC(n, build_Tn(n)); }

} // namespace tracekit
