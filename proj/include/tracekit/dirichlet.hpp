#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "tracekit/cyclo.hpp"

namespace tracekit {

namespace detail {

// (Z/N)^x as a product of cyclic groups with CRT-lifted generators, ordered
// by prime and then by generator (for 2^e, e >= 3: -1 before 5).
struct UnitGroup {
    i64 N = 1;
    std::vector<i64> gens;
    std::vector<i64> orders;
    std::vector<std::vector<int>> dlog; // per residue, exponents (empty for non-units)
};

inline i64 primitive_root_mod_prime_power(i64 p, int e)
{
    i64 q = 1;
    for (int i = 0; i < e; ++i) q *= p;
    i64 ph = q / p * (p - 1);
    auto pf = factor(ph).pf;
    for (i64 g = 2; g < q; ++g) {
        if (g % p == 0) continue;
        bool ok = true;
        for (auto [r, k] : pf) {
            (void)k;
            if (powmod(g, ph / r, q) == 1) {
                ok = false;
                break;
            }
        }
        if (ok) return g;
    }
    return 1; // q = 2
}

inline std::shared_ptr<const UnitGroup> unit_group(i64 N)
{
    static std::mutex mu;
    static std::map<i64, std::shared_ptr<const UnitGroup>> memo;
    {
        std::lock_guard<std::mutex> lk(mu);
        auto it = memo.find(N);
        if (it != memo.end()) return it->second;
    }
    auto G = std::make_shared<UnitGroup>();
    G->N = N;
    auto lift = [&](i64 g, i64 q) {
        // x = g mod q, x = 1 mod N/q
        return crt_solve({{g, q}, {1, N / q}})->first;
    };
    for (auto [p, e] : factor(N).pf) {
        i64 q = 1;
        for (int i = 0; i < e; ++i) q *= p;
        if (p == 2) {
            if (e == 1) continue;
            G->gens.push_back(lift(q - 1, q));
            G->orders.push_back(2);
            if (e >= 3) {
                G->gens.push_back(lift(5, q));
                G->orders.push_back(q / 4);
            }
        } else {
            G->gens.push_back(lift(primitive_root_mod_prime_power(p, e), q));
            G->orders.push_back(q / p * (p - 1));
        }
    }
    G->dlog.assign(N, {});
    const size_t r = G->gens.size();
    std::vector<int> ex(r, 0);
    for (;;) {
        i64 x = 1 % N;
        for (size_t j = 0; j < r; ++j) x = mulmod(x, powmod(G->gens[j], ex[j], N), N);
        G->dlog[x] = ex;
        size_t j = 0;
        while (j < r && ++ex[j] == G->orders[j]) ex[j++] = 0;
        if (j == r) break;
    }
    if (N == 1) G->dlog[0] = {};
    std::lock_guard<std::mutex> lk(mu);
    memo.emplace(N, G);
    return G;
}

} // namespace detail

class DirichletChar {
public:
    DirichletChar() : DirichletChar(1, {}, 0) {}

    DirichletChar(i64 N, std::vector<int> exps, int index) : N_(N), exps_(std::move(exps)), index_(index)
    {
        if (N < 1) throw invalid_input("character modulus must be positive");
        auto G = detail::unit_group(N);
        if (exps_.size() != G->gens.size()) throw invalid_input("exponent vector has wrong length");
        i64 L = 1;
        for (i64 o : G->orders) L = lcm64(L, o);
        std::vector<i64> E(N, -1);
        i64 g = L;
        for (i64 x = 0; x < N; ++x) {
            if (gcd64(x, N) != 1) continue;
            i64 s = 0;
            const auto& dl = G->dlog[x];
            for (size_t j = 0; j < dl.size(); ++j) s += static_cast<i64>(exps_[j]) * dl[j] * (L / G->orders[j]);
            E[x] = mod(s, L);
            g = gcd64(g, E[x]);
        }
        if (N == 1) E[0] = 0;
        // order m = L / gcd(L, all exponents)
        m_ = static_cast<int>(L / (g == 0 ? L : g));
        const i64 scale = L / m_;
        val_.assign(N, -1);
        for (i64 x = 0; x < N; ++x)
            if (E[x] >= 0) val_[x] = static_cast<int>(E[x] / scale);
        // conductor: least M | N with chi(x) = 1 for all units x = 1 mod M
        conductor_ = N;
        for (i64 M : divisors(N)) {
            bool ok = true;
            for (i64 x = 1 % N; x < N && ok; x += M)
                if (val_[x] > 0) ok = false;
            if (N == 1) ok = true;
            if (ok) {
                conductor_ = M;
                break;
            }
        }
        parity_ = val_[mod(-1, N)] == 0 ? 1 : -1;
    }

    i64 modulus() const { return N_; }
    int order() const { return m_; }
    i64 conductor() const { return conductor_; }
    int parity() const { return parity_; }
    int index() const { return index_; }
    bool is_trivial() const { return m_ == 1; }
    const std::vector<int>& exponents() const { return exps_; }
    std::string label() const { return std::to_string(N_) + "." + std::to_string(index_); }

    // exponent e with chi(x) = zeta_m^e, or -1 when gcd(x, N) > 1
    int exponent(i64 x) const { return val_[mod(x, N_)]; }

    CycloNum operator()(i64 x) const
    {
        int e = exponent(x);
        if (e < 0) return CycloNum(0L);
        return CycloNum::zeta(m_, e);
    }

    // Value at x known only modulo M0 (conductor | M0 | N): the induced
    // character mod M0 of the primitive character.
    int exponent_mod(i64 x, i64 M0) const
    {
        if (N_ % M0 != 0 || M0 % conductor_ != 0) throw invalid_input("exponent_mod: need conductor | M0 | N");
        x = mod(x, M0);
        if (gcd64(x, M0) != 1) return -1;
        for (i64 y = x;; y += M0)
            if (gcd64(y, N_) == 1) return exponent(y);
    }

    CycloNum eval_mod(i64 x, i64 M0) const
    {
        int e = exponent_mod(x, M0);
        if (e < 0) return CycloNum(0L);
        return CycloNum::zeta(m_, e);
    }

    bool operator==(const DirichletChar& o) const { return N_ == o.N_ && exps_ == o.exps_; }

private:
    i64 N_;
    std::vector<int> exps_;
    int index_;
    int m_ = 1;
    i64 conductor_ = 1;
    int parity_ = 1;
    std::vector<int> val_;
};

inline const std::vector<DirichletChar>& enumerate_characters(i64 N)
{
    static std::mutex mu;
    static std::map<i64, std::shared_ptr<std::vector<DirichletChar>>> memo;
    {
        std::lock_guard<std::mutex> lk(mu);
        auto it = memo.find(N);
        if (it != memo.end()) return *it->second;
    }
    auto G = detail::unit_group(N);
    auto out = std::make_shared<std::vector<DirichletChar>>();
    const size_t r = G->gens.size();
    std::vector<int> ex(r, 0);
    // lexicographic: first generator varies slowest
    for (int idx = 0;; ++idx) {
        out->emplace_back(N, ex, idx);
        size_t j = r;
        while (j > 0 && ++ex[j - 1] == G->orders[j - 1]) ex[--j] = 0;
        if (j == 0) break;
    }
    std::lock_guard<std::mutex> lk(mu);
    auto [it, inserted] = memo.emplace(N, out);
    (void)inserted;
    return *it->second;
}

inline DirichletChar trivial_character(i64 N) { return enumerate_characters(N).front(); }

inline DirichletChar character_from_label(const std::string& label)
{
    auto dot = label.find('.');
    if (dot == std::string::npos) throw invalid_input("character label must look like N.i: " + label);
    i64 N = std::stoll(label.substr(0, dot));
    long i = std::stol(label.substr(dot + 1));
    if (N < 1) throw invalid_input("bad modulus in character label: " + label);
    const auto& chars = enumerate_characters(N);
    if (i < 0 || i >= static_cast<long>(chars.size())) throw invalid_input("character index out of range: " + label);
    return chars[i];
}

inline CycloNum evaluate(const DirichletChar& chi, i64 x) { return chi(x); }

} // namespace tracekit
