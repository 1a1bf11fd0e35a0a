#pragma once

#include <map>
#include <memory>
#include <vector>

#include "tracekit/cusp_terms.hpp"
#include "tracekit/hecke_operator.hpp"
#include "tracekit/linalg.hpp"

namespace tracekit {

// Which double coset the |_Sigma action is taken for.
struct SigmaDesc {
    enum class Kind { hecke, atkin_lehner };
    Kind kind = Kind::hecke;
    i64 n = 1;
    i64 ell = 1;

    static SigmaDesc hecke(i64 n)
    {
        if (n < 1) throw invalid_input("n must be positive");
        return {Kind::hecke, n, 1};
    }
    static SigmaDesc atkin_lehner(i64 n, i64 ell)
    {
        if (n < 1) throw invalid_input("n must be positive");
        return {Kind::atkin_lehner, n, ell};
    }

    i64 det() const { return kind == Kind::hecke ? n : n * ell; }
};

namespace detail {

// column j holds the coefficients of (aX+b)^j (cX+d)^(w-j); row-major, (w+1)^2 entries
inline std::vector<Int> slash_matrix(const IntMat2& M, int w)
{
    const size_t W = static_cast<size_t>(w) + 1;
    std::vector<std::vector<Int>> pa(W), pc(W); // powers of aX+b and cX+d
    pa[0] = pc[0] = {Int(1)};
    for (size_t e = 1; e < W; ++e) {
        for (auto [src, dst, lin, con] : {std::tuple{&pa[e - 1], &pa[e], &M.a, &M.b},
                                          std::tuple{&pc[e - 1], &pc[e], &M.c, &M.d}}) {
            dst->assign(e + 1, Int(0));
            for (size_t i = 0; i < e; ++i) {
                (*dst)[i] += (*src)[i] * *con;
                (*dst)[i + 1] += (*src)[i] * *lin;
            }
        }
    }
    std::vector<Int> out(W * W, Int(0));
    for (size_t j = 0; j < W; ++j) {
        const auto& x = pa[j];
        const auto& y = pc[W - 1 - j];
        for (size_t r = 0; r < x.size(); ++r) {
            if (sgn(x[r]) == 0) continue;
            for (size_t s = 0; s < y.size(); ++s) out[(r + s) * W + j] += x[r] * y[s];
        }
    }
    return out;
}

} // namespace detail

// Block description of P -> P|_Sigma M: target coset i draws from coset src[i]
// (or nothing when src[i] < 0), twisted by zeta^exp[i] and slashed by M.
struct BlockAction {
    std::vector<int> src;
    std::vector<int> exp;
    std::vector<Int> slash;
};

// The induced module V_w for Gamma0(N) and chi, coordinates (coset, monomial degree).
template <class F>
class PeriodModule {
    using FT = FieldTraits<F>;

public:
    PeriodModule(i64 N, const DirichletChar& chi, int w) : N_(N), w_(w), chi_(chi), tab_(coset_table(N))
    {
        if (w < 0) throw invalid_input("w must be nonnegative");
        if (chi.modulus() != N) throw invalid_input("character modulus must equal the level");
        m_ = std::max(1, chi.order());
        for (int e = 0; e < m_; ++e) zeta_.push_back(FT::zeta(m_, e));
        // -1 acts by chi(-1) on values and by (-1)^w through the slash; they must agree
        parity_ok_ = parity_ok(chi, w + 2);
    }

    i64 level() const { return N_; }
    int w() const { return w_; }
    const DirichletChar& character() const { return chi_; }
    const CosetTable& cosets() const { return *tab_; }
    size_t block() const { return static_cast<size_t>(w_) + 1; }
    // zero module when the parity condition fails
    size_t dim() const { return parity_ok_ ? tab_->size() * block() : 0; }

    bool in_sigma(const Mat64& X, const SigmaDesc& s, int* e) const
    {
        if (s.kind == SigmaDesc::Kind::atkin_lehner) {
            *e = 0;
            return in_delta_theta(X, N_, s.ell);
        }
        if (X.c != 0 || gcd64(X.a, N_) != 1) return false;
        *e = N_ == 1 ? 0 : chi_.exponent(X.a);
        return true;
    }

    BlockAction block_action(const IntMat2& M, const SigmaDesc& s) const
    {
        if (sgn(M.det()) <= 0 || M.det() != s.det()) throw invalid_input("matrix determinant does not match the double coset");
        BlockAction a;
        const size_t P = tab_->size();
        a.src.assign(P, -1);
        a.exp.assign(P, 0);
        const Mat64 m = reduce_mod(M, N_);
        for (size_t i = 0; i < P; ++i) {
            const Mat64 Y = mulmod(m, tab_->rep64_inv(i).reduce(N_), N_);
            for (size_t j = 0; j < P; ++j) {
                const Mat64 X = mulmod(tab_->rep64(j).reduce(N_), Y, N_);
                int e;
                if (!in_sigma(X, s, &e)) continue;
                if (a.src[i] >= 0) throw internal_error("coset map for the double coset is not injective");
                a.src[i] = static_cast<int>(j);
                a.exp[i] = e;
            }
        }
        a.slash = detail::slash_matrix(M, w_);
        return a;
    }

    DenseMatrix<F> matrix(const BlockAction& a) const
    {
        DenseMatrix<F> out(dim(), dim());
        if (dim() == 0) return out;
        const size_t W = block();
        for (size_t i = 0; i < a.src.size(); ++i) {
            if (a.src[i] < 0) continue;
            const size_t j = static_cast<size_t>(a.src[i]);
            const F& z = zeta_[a.exp[i]];
            for (size_t r = 0; r < W; ++r)
                for (size_t c = 0; c < W; ++c)
                    if (sgn(a.slash[r * W + c]) != 0) out(i * W + r, j * W + c) = z * FT::from_int(a.slash[r * W + c]);
        }
        return out;
    }

    DenseMatrix<F> act_sigma(const SigmaDesc& s, const IntMat2& M) const { return matrix(block_action(M, s)); }

    DenseMatrix<F> act_gamma(const IntMat2& g) const
    {
        if (g.det() != 1) throw invalid_input("act_gamma needs determinant 1");
        return act_sigma(SigmaDesc::hecke(1), g);
    }

    // matrix of P -> P | x for x in Q[M_det]
    DenseMatrix<F> operator_matrix(const GroupRingElem& x, const SigmaDesc& s) const
    {
        const size_t D = dim(), W = block();
        DenseMatrix<F> out(D, D);
        if (D == 0) return out;
        // accumulate rationally per character exponent, then combine once
        std::vector<DenseMatrix<Rational>> acc(m_, DenseMatrix<Rational>(D, D));
        std::vector<bool> used(m_, false);
        for (const auto& [pm, c] : x.terms()) {
            BlockAction a = block_action(pm.mat(), s);
            for (size_t i = 0; i < a.src.size(); ++i) {
                if (a.src[i] < 0) continue;
                const size_t j = static_cast<size_t>(a.src[i]);
                auto& R = acc[a.exp[i]];
                used[a.exp[i]] = true;
                for (size_t r = 0; r < W; ++r)
                    for (size_t cc = 0; cc < W; ++cc)
                        if (sgn(a.slash[r * W + cc]) != 0) R(i * W + r, j * W + cc) += c * a.slash[r * W + cc];
            }
        }
        for (int e = 0; e < m_; ++e) {
            if (!used[e]) continue;
            for (size_t i = 0; i < D; ++i)
                for (size_t j = 0; j < D; ++j)
                    if (sgn(acc[e](i, j)) != 0) out(i, j) += zeta_[e] * F(acc[e](i, j));
        }
        return out;
    }

    DenseMatrix<F> gamma_ring_matrix(const GroupRingElem& x) const { return operator_matrix(x, SigmaDesc::hecke(1)); }

    // W = Ker(1+S) ∩ Ker(1+U+U^2)
    const EchelonBasis<F>& period_space() const
    {
        if (!W_) {
            auto stacked = gamma_ring_matrix(one_plus_S()).vstack(gamma_ring_matrix(one_plus_U_U2()));
            W_ = std::make_shared<EchelonBasis<F>>(echelon_basis(nullspace(stacked), dim()));
        }
        return *W_;
    }

    // D = Ker(1-T)
    const EchelonBasis<F>& t_invariants() const
    {
        if (!Dw_) Dw_ = std::make_shared<EchelonBasis<F>>(echelon_basis(nullspace(gamma_ring_matrix(one_minus_T())), dim()));
        return *Dw_;
    }

    // C = (1-S) D
    const EchelonBasis<F>& coboundaries() const
    {
        if (!Cw_) {
            auto op = gamma_ring_matrix(one_minus_S());
            std::vector<std::vector<F>> img;
            for (const auto& b : t_invariants().rows) img.push_back(op.apply(b));
            Cw_ = std::make_shared<EchelonBasis<F>>(echelon_basis(img, dim()));
        }
        return *Cw_;
    }

    // rank of Ker(1+S) + Ker(1+U+U^2)
    size_t kernel_sum_rank() const
    {
        auto k1 = nullspace(gamma_ring_matrix(one_plus_S()));
        auto k2 = nullspace(gamma_ring_matrix(one_plus_U_U2()));
        k1.insert(k1.end(), k2.begin(), k2.end());
        if (k1.empty()) return 0;
        return echelon_basis(k1, dim()).size();
    }

    // trace of op on the span of B; throws unless op maps the span into itself
    F restricted_trace(const DenseMatrix<F>& op, const EchelonBasis<F>& B, const char* what) const
    {
        F t(0L);
        std::vector<F> coords;
        for (size_t r = 0; r < B.size(); ++r) {
            std::vector<F> v = op.apply(B.rows[r]);
            if (!B.coordinates(v, coords))
                throw internal_error(std::string("operator does not preserve ") + what);
            t += coords[r];
        }
        return t;
    }

private:
    i64 N_;
    int w_;
    DirichletChar chi_;
    std::shared_ptr<const CosetTable> tab_;
    int m_ = 1;
    std::vector<F> zeta_;
    bool parity_ok_ = true;
    mutable std::shared_ptr<EchelonBasis<F>> W_, Dw_, Cw_;
};

namespace detail {

inline bool needs_cyclo(const DirichletChar& chi) { return chi.order() > 2; }

// run f with a module over Q when chi takes values in Q, else over Q(zeta)
template <class Fn>
CycloNum with_module(i64 N, const DirichletChar& chi, int w, Fn&& f)
{
    if (needs_cyclo(chi)) {
        PeriodModule<CycloNum> m(N, chi, w);
        return f(m);
    }
    PeriodModule<Rational> m(N, chi, w);
    return f(m);
}

template <class F>
CycloNum to_cyclo(const F& x)
{
    return FieldTraits<F>::to_cyclo(x);
}

inline void check_sigma_char(const DirichletChar& chi, const SigmaDesc& s)
{
    if (s.kind == SigmaDesc::Kind::atkin_lehner) {
        check_exact_divisor(chi.modulus(), s.ell);
        if (!chi.is_trivial()) throw invalid_input("Atkin-Lehner double cosets need the trivial character");
    }
}

} // namespace detail

template <class F>
CycloNum trace_on_W(const PeriodModule<F>& mod, const SigmaDesc& s, const GroupRingElem& Tn)
{
    detail::check_sigma_char(mod.character(), s);
    if (mod.dim() == 0) return CycloNum(0L);
    auto op = mod.operator_matrix(Tn, s);
    return detail::to_cyclo(mod.restricted_trace(op, mod.period_space(), "the period space"));
}

// trace on the whole induced module; differs from the W-trace by the sum of chi over the cosets when w = 0, chi = 1
template <class F>
CycloNum trace_on_V(const PeriodModule<F>& mod, const SigmaDesc& s, const GroupRingElem& Tn)
{
    detail::check_sigma_char(mod.character(), s);
    return detail::to_cyclo(mod.operator_matrix(Tn, s).trace());
}

inline CycloNum trace_on_W(i64 N, const DirichletChar& chi, int w, const SigmaDesc& s, const GroupRingElem& Tn)
{
    return detail::with_module(N, chi, w, [&](auto& m) { return trace_on_W(m, s, Tn); });
}

inline CycloNum trace_on_W(i64 N, const DirichletChar& chi, int w, const SigmaDesc& s)
{
    return trace_on_W(N, chi, w, s, build_Tn(s.det()));
}

inline i64 period_space_dim(i64 N, const DirichletChar& chi, int w)
{
    i64 d = 0;
    detail::with_module(N, chi, w, [&](auto& m) {
        d = static_cast<i64>(m.period_space().size());
        return CycloNum(0L);
    });
    return d;
}

struct CoboundaryReport {
    CycloNum via_C;   // tr of the universal operator on (1-S) Ker(1-T)
    CycloNum via_D;   // tr of the upper-triangular operator on Ker(1-T)
    CycloNum defect;  // via_D - via_C; nonzero only for w = 0 and trivial chi
    size_t dim_D = 0, dim_C = 0;
};

template <class F>
CoboundaryReport coboundary_report(const PeriodModule<F>& mod, const SigmaDesc& s)
{
    detail::check_sigma_char(mod.character(), s);
    CoboundaryReport r;
    if (mod.dim() == 0) return r;
    const auto& D = mod.t_invariants();
    const auto& C = mod.coboundaries();
    r.dim_D = D.size();
    r.dim_C = C.size();
    auto tinf = mod.operator_matrix(build_Tn_infty(s.det()), s);
    r.via_D = detail::to_cyclo(mod.restricted_trace(tinf, D, "Ker(1-T)"));
    auto tn = mod.operator_matrix(build_Tn(s.det()), s);
    r.via_C = detail::to_cyclo(mod.restricted_trace(tn, C, "the coboundary space"));
    r.defect = r.via_D - r.via_C;
    return r;
}

inline CoboundaryReport coboundary_report(i64 N, const DirichletChar& chi, int w, const SigmaDesc& s)
{
    CoboundaryReport out;
    detail::with_module(N, chi, w, [&](auto& m) {
        out = coboundary_report(m, s);
        return CycloNum(0L);
    });
    return out;
}

// trace on the coboundary space, which carries the Eisenstein part
inline CycloNum trace_coboundary(i64 N, const DirichletChar& chi, int w, const SigmaDesc& s)
{
    return coboundary_report(N, chi, w, s).via_C;
}

// number of cusps C with chi trivial on the stabilizer C T^width C^{-1}
inline i64 admissible_cusp_count(i64 N, const DirichletChar& chi)
{
    i64 cnt = 0;
    for (const auto& c : cusp_reps(N)) {
        Int d = 1 + c.width * c.C.a * c.C.c; // lower-right entry of C T^width C^{-1}
        if (N == 1 || chi.exponent(fmod(d, Int(N)).get_si()) == 0) ++cnt;
    }
    return cnt;
}

} // namespace tracekit
