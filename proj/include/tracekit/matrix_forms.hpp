#pragma once

#include <optional>
#include <ostream>
#include <set>
#include <tuple>
#include <vector>

#include "tracekit/arith.hpp"

namespace tracekit {

struct IntMat2 {
    Int a = 1, b = 0, c = 0, d = 1;

    IntMat2() = default;
    IntMat2(Int a_, Int b_, Int c_, Int d_) : a(std::move(a_)), b(std::move(b_)), c(std::move(c_)), d(std::move(d_)) {}
    IntMat2(long a_, long b_, long c_, long d_) : a(a_), b(b_), c(c_), d(d_) {}

    Int det() const { return a * d - b * c; }
    Int trace() const { return a + d; }

    IntMat2 operator-() const { return {-a, -b, -c, -d}; }
    IntMat2 operator*(const IntMat2& o) const
    {
        return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
    }
    // adjugate; equals the inverse when det = 1
    IntMat2 adj() const { return {d, -b, -c, a}; }

    bool is_scalar() const { return b == 0 && c == 0 && a == d; }

    bool operator==(const IntMat2& o) const { return a == o.a && b == o.b && c == o.c && d == o.d; }
    bool operator!=(const IntMat2& o) const { return !(*this == o); }
    bool operator<(const IntMat2& o) const
    {
        if (a != o.a) return a < o.a;
        if (b != o.b) return b < o.b;
        if (c != o.c) return c < o.c;
        return d < o.d;
    }
};

inline std::ostream& operator<<(std::ostream& os, const IntMat2& m)
{
    return os << "(" << m.a << "," << m.b << ";" << m.c << "," << m.d << ")";
}

namespace gens {
inline IntMat2 S() { return {0, -1, 1, 0}; }
inline IntMat2 T() { return {1, 1, 0, 1}; }
inline IntMat2 Tinv() { return {1, -1, 0, 1}; }
inline IntMat2 U() { return {1, -1, 1, 0}; }
inline IntMat2 I() { return {1, 0, 0, 1}; }
} // namespace gens

// Element of M̄_n: the representative whose first nonzero entry is positive.
class ProjMat {
public:
    explicit ProjMat(const IntMat2& m) : m_(m)
    {
        if (sgn(m.det()) <= 0) throw invalid_input("ProjMat requires positive determinant");
        int s = sgn(m_.a) ? sgn(m_.a) : sgn(m_.b) ? sgn(m_.b) : sgn(m_.c) ? sgn(m_.c) : sgn(m_.d);
        if (s < 0) m_ = -m_;
    }

    const IntMat2& mat() const { return m_; }
    bool operator==(const ProjMat& o) const { return m_ == o.m_; }
    bool operator!=(const ProjMat& o) const { return m_ != o.m_; }
    bool operator<(const ProjMat& o) const { return m_ < o.m_; }

private:
    IntMat2 m_;
};

inline ProjMat proj_canonical(const IntMat2& m) { return ProjMat(m); }

struct QuadForm {
    Int A = 0, B = 0, C = 0;

    Int disc() const { return B * B - 4 * A * C; }
    Int content() const { return gcd(gcd(A, B), C); }
    QuadForm operator-() const { return {-A, -B, -C}; }
    Int eval(const Int& x, const Int& y) const { return A * x * x + B * x * y + C * y * y; }
    // Q∘g, i.e. (x,y) -> Q(g (x,y)^T)
    QuadForm compose(const IntMat2& g) const
    {
        return {eval(g.a, g.c), 2 * A * g.a * g.b + B * (g.a * g.d + g.b * g.c) + 2 * C * g.c * g.d, eval(g.b, g.d)};
    }

    bool operator==(const QuadForm& o) const { return A == o.A && B == o.B && C == o.C; }
    bool operator!=(const QuadForm& o) const { return !(*this == o); }
    bool operator<(const QuadForm& o) const
    {
        if (A != o.A) return A < o.A;
        if (B != o.B) return B < o.B;
        return C < o.C;
    }
};

inline std::ostream& operator<<(std::ostream& os, const QuadForm& q)
{
    return os << "[" << q.A << "," << q.B << "," << q.C << "]";
}

inline QuadForm quad_form_of(const IntMat2& m) { return {m.c, m.d - m.a, -m.b}; }

namespace detail {

inline QuadForm gauss_reduce_positive(QuadForm q)
{
    const Int D = q.disc();
    for (;;) {
        // bring B into (-A, A]
        Int twoA = 2 * q.A;
        Int k = fdiv(q.A - q.B, twoA);
        q.B += twoA * k;
        q.C = (q.B * q.B - D) / (4 * q.A);
        if (q.A > q.C) {
            q = {q.C, -q.B, q.A};
            continue;
        }
        break;
    }
    if (q.A == q.C && sgn(q.B) < 0) q.B = -q.B;
    return q;
}

// Classical reduction for indefinite forms of nonsquare discriminant.
struct IndefiniteReducer {
    Int D, s; // s = floor(sqrt(D))

    explicit IndefiniteReducer(const Int& disc) : D(disc), s(isqrt(disc)) {}

    Int normal_b(const Int& b, const Int& a) const
    {
        Int aa = abs(a);
        Int two = 2 * aa;
        if (aa > s) {
            // -|a| < b' <= |a|
            Int k = fdiv(b + aa - 1, two);
            return b - two * k;
        }
        // sqrt(D) - 2|a| < b' < sqrt(D)
        return s - fmod(s - b, two);
    }

    bool reduced(const QuadForm& q) const
    {
        Int aa = abs(q.A);
        return sgn(q.B) > 0 && q.B <= s && 2 * aa + q.B >= s + 1 && 2 * aa - q.B <= s;
    }

    QuadForm normalize(const QuadForm& q) const
    {
        Int b = normal_b(q.B, q.A);
        return {q.A, b, (b * b - D) / (4 * q.A)};
    }

    QuadForm rho(const QuadForm& q) const
    {
        Int b = normal_b(-q.B, q.C);
        return {q.C, b, (b * b - D) / (4 * q.C)};
    }
};

inline QuadForm indefinite_key(const QuadForm& q0)
{
    IndefiniteReducer R(q0.disc());
    const Int bound = 4 * R.D + 16;
    Int steps = 0;
    QuadForm q = q0;
    if (sgn(q.A) == 0) q = {q.C, -q.B, q.A}; // S-move; A = 0 impossible for nonsquare D, kept defensive
    q = R.normalize(q);
    while (!R.reduced(q)) {
        q = R.rho(q);
        if (++steps > bound) throw internal_error("indefinite reduction did not terminate");
    }
    QuadForm best = q, cur = R.rho(q);
    while (cur != q) {
        if (cur < best) best = cur;
        cur = R.rho(cur);
        if (++steps > bound) throw internal_error("indefinite cycle did not close");
    }
    return best;
}

inline QuadForm square_key(const QuadForm& q, const Int& m)
{
    // candidate primitive zeros (x0, y0) of q
    std::vector<std::pair<Int, Int>> zeros;
    if (sgn(q.A) == 0) {
        zeros.emplace_back(Int(1), Int(0));
        // y (B x + C y) = 0
        Int g = gcd(q.B, q.C);
        zeros.emplace_back(-q.C / g, q.B / g);
    }
    if (sgn(q.C) == 0) zeros.emplace_back(Int(0), Int(1));
    if (sgn(q.A) != 0) {
        for (int sg : {1, -1}) {
            Int num = -q.B + sg * m, den = 2 * q.A;
            Int g = gcd(num, den);
            num /= g;
            den /= g;
            if (sgn(den) < 0) {
                num = -num;
                den = -den;
            }
            zeros.emplace_back(num, den);
        }
    }
    for (auto& [x0, y0] : zeros) {
        // complete (x0, y0) to a column of an SL2(Z) matrix
        Int g, s, t;
        mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), x0.get_mpz_t(), y0.get_mpz_t());
        // x0*s + y0*t = 1  ->  gamma = (x0, -t; y0, s)
        IntMat2 gamma(x0, -t, y0, s);
        QuadForm q1 = q.compose(gamma); // [0, B', C']
        QuadForm q2{q1.C, -q1.B, Int(0)};
        if (q2.B == m) return {fmod(q2.A, m), m, Int(0)};
    }
    throw internal_error("square discriminant reduction failed");
}

} // namespace detail

// Canonical representative of the SL2(Z)-orbit of q.
inline QuadForm reduce_form(const QuadForm& q)
{
    const Int D = q.disc();
    if (sgn(D) < 0) {
        int s = sgn(q.A);
        QuadForm p = s > 0 ? q : -q;
        QuadForm r = detail::gauss_reduce_positive(p);
        return s > 0 ? r : -r;
    }
    if (sgn(D) == 0) {
        Int g = q.content();
        if (sgn(g) == 0) return {};
        int s = sgn(q.A) ? sgn(q.A) : sgn(q.C);
        return {s * g, Int(0), Int(0)};
    }
    Int m;
    if (is_square(D, &m)) return detail::square_key(q, m);
    return detail::indefinite_key(q);
}

struct ClassLabel {
    Int det;
    Int t;
    QuadForm key;
    Int content;

    auto tie() const { return std::tie(det, t, key, content); }
    bool operator==(const ClassLabel& o) const { return tie() == o.tie(); }
    bool operator!=(const ClassLabel& o) const { return !(*this == o); }
    bool operator<(const ClassLabel& o) const { return tie() < o.tie(); }
};

inline std::ostream& operator<<(std::ostream& os, const ClassLabel& l)
{
    return os << "{n=" << l.det << ",t=" << l.t << ",key=" << l.key << ",g=" << l.content << "}";
}

inline ClassLabel class_label(const IntMat2& m)
{
    Int n = m.det();
    if (sgn(n) <= 0) throw invalid_input("class_label requires positive determinant");
    Int t = m.trace();
    QuadForm q = quad_form_of(m);
    if (sgn(t) < 0) {
        t = -t;
        q = -q;
    }
    QuadForm key = reduce_form(q);
    if (sgn(t) == 0) {
        QuadForm other = reduce_form(-q);
        if (other < key) key = other;
    }
    return {n, t, key, q.content()};
}

// Order of the stabilizer of M under conjugation by PSL2(Z); nullopt when infinite.
inline std::optional<Int> stab_order(const IntMat2& m)
{
    if (sgn(m.det()) <= 0) throw invalid_input("stab_order requires positive determinant");
    QuadForm q = quad_form_of(m);
    Int D = q.disc();
    if (sgn(D) < 0) {
        Int g = q.content();
        Int r = D / (g * g);
        if (r == -3) return Int(3);
        if (r == -4) return Int(2);
        return Int(1);
    }
    if (sgn(D) > 0 && is_square(D)) return Int(1);
    return std::nullopt;
}

inline Rational epsilon(const IntMat2& m)
{
    if (sgn(m.det()) <= 0) throw invalid_input("epsilon requires positive determinant");
    if (m.is_scalar()) return Rational(1, 6);
    Int D = m.trace() * m.trace() - 4 * m.det();
    if (sgn(D) == 0) return 0;
    if (sgn(D) > 0) return is_square(D) ? Rational(1) : Rational(0);
    Rational e(-1);
    e /= *stab_order(m);
    return e;
}

} // namespace tracekit
