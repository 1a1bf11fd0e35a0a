#pragma once

#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <string>
#include <unordered_map>

#include "tracekit/arith.hpp"

namespace tracekit {

enum class ClassNumberKind { H, h0 };

inline const char* kind_name(ClassNumberKind k) { return k == ClassNumberKind::H ? "H" : "h0"; }

// Write-through memo for H and h0. Values are pure functions of D, so the
// cache only ever saves time.
class ClassNumberCache {
public:
    static ClassNumberCache& instance()
    {
        static ClassNumberCache c;
        return c;
    }

    bool lookup(ClassNumberKind k, i64 D, Rational& out)
    {
        std::lock_guard<std::mutex> lk(mu_);
        auto& m = table(k);
        auto it = m.find(D);
        if (it == m.end()) return false;
        out = it->second;
        return true;
    }

    void store(ClassNumberKind k, i64 D, const Rational& v)
    {
        std::lock_guard<std::mutex> lk(mu_);
        table(k).emplace(D, v);
    }

    void clear()
    {
        std::lock_guard<std::mutex> lk(mu_);
        H_.clear();
        h0_.clear();
    }

    // CSV rows kind,D,num,den
    void load_csv(std::istream& in)
    {
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty() || line.rfind("kind", 0) == 0) continue;
            std::stringstream ss(line);
            std::string kind, D, num, den;
            if (!std::getline(ss, kind, ',') || !std::getline(ss, D, ',') || !std::getline(ss, num, ',') ||
                !std::getline(ss, den, ','))
                throw invalid_input("malformed cache row: " + line);
            ClassNumberKind k;
            if (kind == "H")
                k = ClassNumberKind::H;
            else if (kind == "h0")
                k = ClassNumberKind::h0;
            else
                throw invalid_input("unknown class number kind in cache: " + kind);
            store(k, std::stoll(D), make_rational(Int(num), Int(den)));
        }
    }

    void save_csv(std::ostream& out)
    {
        std::lock_guard<std::mutex> lk(mu_);
        out << "kind,D,num,den\n";
        for (auto* k : {&H_, &h0_}) {
            std::map<i64, Rational> sorted(k->begin(), k->end());
            const char* name = k == &H_ ? "H" : "h0";
            for (auto& [D, v] : sorted) out << name << "," << D << "," << v.get_num() << "," << v.get_den() << "\n";
        }
    }

private:
    std::unordered_map<i64, Rational>& table(ClassNumberKind k) { return k == ClassNumberKind::H ? H_ : h0_; }

    std::mutex mu_;
    std::unordered_map<i64, Rational> H_, h0_;
};

namespace detail {

// Reduced positive definite forms [a,b,c] of discriminant -D, D > 0.
// Calls f(a, b, c) once per reduced form.
template <class F>
void for_each_reduced_form(i64 D, F&& f)
{
    for (i64 a = 1; 3 * a * a <= D; ++a) {
        i64 b0 = -a + 1;
        if (mod(b0 - D, 2) != 0) ++b0;
        for (i64 b = b0; b <= a; b += 2) {
            i64 num = b * b + D;
            if (num % (4 * a) != 0) continue;
            i64 c = num / (4 * a);
            if (c < a) continue;
            if (c == a && b < 0) continue;
            f(a, b, c);
        }
    }
}

inline Rational hurwitz_H_uncached(i64 D)
{
    if (D == 0) return Rational(-1, 12);
    if (D < 0) {
        i64 u;
        if (is_square64(-D, &u)) return make_rational(-u, 2);
        return 0;
    }
    if (mod(D, 4) == 1 || mod(D, 4) == 2) return 0;
    Rational h = 0;
    for_each_reduced_form(D, [&](i64 a, i64 b, i64 c) {
        if (a == b && b == c)
            h += Rational(1, 3);
        else if (b == 0 && a == c)
            h += Rational(1, 2);
        else
            h += 1;
    });
    return h;
}

inline Rational h0_uncached(i64 D)
{
    if (D == 0) return Rational(-1, 12);
    if (D > 0) {
        i64 u;
        if (is_square64(D, &u)) return make_rational(-euler_phi(u), 2);
        return 0;
    }
    i64 m = mod(D, 4);
    if (m != 0 && m != 1) return 0;
    i64 h = 0;
    for_each_reduced_form(-D, [&](i64 a, i64 b, i64 c) {
        if (gcd64(gcd64(a, b), c) == 1) ++h;
    });
    i64 w = D == -3 ? 6 : (D == -4 ? 4 : 2);
    return make_rational(2 * h, w);
}

} // namespace detail

// Hurwitz class number with H(0) = -1/12 and H(-u^2) = -u/2.
inline Rational hurwitz_H(i64 D)
{
    auto& cache = ClassNumberCache::instance();
    Rational v;
    if (cache.lookup(ClassNumberKind::H, D, v)) return v;
    v = detail::hurwitz_H_uncached(D);
    cache.store(ClassNumberKind::H, D, v);
    return v;
}

// 2h(D)/w(D) for negative discriminants, extended to D >= 0.
inline Rational h0(i64 D)
{
    auto& cache = ClassNumberCache::instance();
    Rational v;
    if (cache.lookup(ClassNumberKind::h0, D, v)) return v;
    v = detail::h0_uncached(D);
    cache.store(ClassNumberKind::h0, D, v);
    return v;
}

inline Rational class_number(ClassNumberKind k, i64 D) { return k == ClassNumberKind::H ? hurwitz_H(D) : h0(D); }

} // namespace tracekit
