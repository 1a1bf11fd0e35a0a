#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "tracekit/matrix_forms.hpp"

namespace tracekit {

// Small integral matrix for residue-level work.
struct Mat64 {
    i64 a, b, c, d;
    Mat64 operator*(const Mat64& o) const
    {
        return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
    }
    Mat64 reduce(i64 N) const { return {mod(a, N), mod(b, N), mod(c, N), mod(d, N)}; }
    Mat64 adj() const { return {d, -b, -c, a}; }
};

inline Mat64 mulmod(const Mat64& x, const Mat64& y, i64 N)
{
    return {mod(mulmod(x.a, y.a, N) + mulmod(x.b, y.c, N), N), mod(mulmod(x.a, y.b, N) + mulmod(x.b, y.d, N), N),
            mod(mulmod(x.c, y.a, N) + mulmod(x.d, y.c, N), N), mod(mulmod(x.c, y.b, N) + mulmod(x.d, y.d, N), N)};
}

inline Mat64 reduce_mod(const IntMat2& m, i64 N)
{
    Int NN(N);
    return {fmod(m.a, NN).get_si(), fmod(m.b, NN).get_si(), fmod(m.c, NN).get_si(), fmod(m.d, NN).get_si()};
}

// Projective line over Z/N: cosets of Gamma0(N) in SL2(Z), indexed by bottom rows (c:d).
class CosetTable {
public:
    explicit CosetTable(i64 N) : N_(N)
    {
        if (N < 1) throw invalid_input("coset table level must be positive");
        lookup_.assign(static_cast<size_t>(N * N), {-1, 0});
        std::vector<i64> units;
        for (i64 l = 0; l < N; ++l)
            if (gcd64(l, N) == 1) units.push_back(l);
        if (N == 1) units = {0};
        for (i64 c = 0; c < N; ++c) {
            for (i64 d = 0; d < N; ++d) {
                if (gcd64(gcd64(c, d), N) != 1) continue;
                if (lookup_[c * N + d].first >= 0) continue;
                // (c, d) is the lexicographically first point of its orbit
                int idx = static_cast<int>(points_.size());
                points_.push_back({c, d});
                for (i64 l : units) {
                    i64 c2 = mulmod(l, c, N), d2 = mulmod(l, d, N);
                    // (c2, d2) = l (c, d)
                    if (lookup_[c2 * N + d2].first < 0) lookup_[c2 * N + d2] = {idx, N == 1 ? 0 : l};
                }
                lifts_.push_back(lift(c, d));
            }
        }
        for (auto& m : lifts_) {
            lifts64_.push_back({m.a.get_si(), m.b.get_si(), m.c.get_si(), m.d.get_si()});
            inv64_.push_back(lifts64_.back().adj());
        }
    }

    i64 level() const { return N_; }
    size_t size() const { return points_.size(); }
    const std::pair<i64, i64>& point(size_t i) const { return points_[i]; }
    const IntMat2& rep(size_t i) const { return lifts_[i]; }
    const Mat64& rep64(size_t i) const { return lifts64_[i]; }
    const Mat64& rep64_inv(size_t i) const { return inv64_[i]; }

    // For a bottom row (c, d) with gcd(c, d, N) = 1: the index i and the unit
    // lambda with (c, d) = lambda * (c_i, d_i) mod N. For B in SL2(Z) with that
    // bottom row, B * rep(i)^{-1} lies in Gamma0(N) and has lower-right entry lambda.
    std::pair<int, i64> lookup(i64 c, i64 d) const
    {
        auto r = lookup_[mod(c, N_) * N_ + mod(d, N_)];
        if (r.first < 0) throw invalid_input("bottom row is not a point of P^1(Z/N)");
        return r;
    }

private:
    IntMat2 lift(i64 c, i64 d) const
    {
        if (c == 0 && (N_ == 1 || d == 1)) return gens::I();
        i64 c1 = c, d1 = d;
        if (c1 == 0) c1 = N_;
        while (gcd64(c1, d1) != 1) d1 += N_;
        auto [g, x, y] = ext_gcd(d1, c1); // x d1 + y c1 = 1
        (void)g;
        // (a b; c1 d1) with a d1 - b c1 = 1: a = x, b = -y
        return {x, -y, c1, d1};
    }

    i64 N_;
    std::vector<std::pair<i64, i64>> points_;
    std::vector<IntMat2> lifts_;
    std::vector<Mat64> lifts64_, inv64_;
    std::vector<std::pair<int, i64>> lookup_;
};

inline std::shared_ptr<const CosetTable> coset_table(i64 N)
{
    static std::mutex mu;
    static std::map<i64, std::shared_ptr<const CosetTable>> memo;
    {
        std::lock_guard<std::mutex> lk(mu);
        auto it = memo.find(N);
        if (it != memo.end()) return it->second;
    }
    auto t = std::make_shared<const CosetTable>(N);
    std::lock_guard<std::mutex> lk(mu);
    memo.emplace(N, t);
    return t;
}

inline std::shared_ptr<const CosetTable> build_coset_table(i64 N) { return coset_table(N); }

} // namespace tracekit
