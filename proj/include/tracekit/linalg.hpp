#pragma once

#include <vector>

#include "tracekit/cyclo.hpp"

namespace tracekit {

template <class F>
struct FieldTraits;

template <>
struct FieldTraits<Rational> {
    static bool is_zero(const Rational& x) { return sgn(x) == 0; }
    static Rational inverse(const Rational& x) { return 1 / x; }
    static Rational from_int(const Int& x) { return Rational(x); }
    // only orders 1 and 2 live in Q
    static Rational zeta(int m, int e)
    {
        if (m > 2) throw internal_error("root of unity of order > 2 requested in Q");
        return mod(e, 2) == 0 || m == 1 ? Rational(1) : Rational(-1);
    }
    static CycloNum to_cyclo(const Rational& x) { return CycloNum(x); }
};

template <>
struct FieldTraits<CycloNum> {
    static bool is_zero(const CycloNum& x) { return x.is_zero(); }
    static CycloNum inverse(const CycloNum& x) { return x.inverse(); }
    static CycloNum from_int(const Int& x) { return CycloNum(x); }
    static CycloNum zeta(int m, int e) { return CycloNum::zeta(m, e); }
    static CycloNum to_cyclo(const CycloNum& x) { return x; }
};

template <class F>
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(size_t r, size_t c) : r_(r), c_(c), a_(r * c, F(0L)) {}

    size_t rows() const { return r_; }
    size_t cols() const { return c_; }
    F& operator()(size_t i, size_t j) { return a_[i * c_ + j]; }
    const F& operator()(size_t i, size_t j) const { return a_[i * c_ + j]; }

    static DenseMatrix identity(size_t n)
    {
        DenseMatrix m(n, n);
        for (size_t i = 0; i < n; ++i) m(i, i) = F(1L);
        return m;
    }

    DenseMatrix& operator+=(const DenseMatrix& o)
    {
        for (size_t i = 0; i < a_.size(); ++i)
            if (!FieldTraits<F>::is_zero(o.a_[i])) a_[i] += o.a_[i];
        return *this;
    }

    DenseMatrix operator*(const DenseMatrix& o) const
    {
        DenseMatrix r(r_, o.c_);
        for (size_t i = 0; i < r_; ++i)
            for (size_t k = 0; k < c_; ++k) {
                const F& x = (*this)(i, k);
                if (FieldTraits<F>::is_zero(x)) continue;
                for (size_t j = 0; j < o.c_; ++j)
                    if (!FieldTraits<F>::is_zero(o(k, j))) r(i, j) += x * o(k, j);
            }
        return r;
    }

    std::vector<F> apply(const std::vector<F>& v) const
    {
        std::vector<F> out(r_, F(0L));
        for (size_t j = 0; j < c_; ++j) {
            if (FieldTraits<F>::is_zero(v[j])) continue;
            for (size_t i = 0; i < r_; ++i)
                if (!FieldTraits<F>::is_zero((*this)(i, j))) out[i] += (*this)(i, j) * v[j];
        }
        return out;
    }

    bool is_zero() const
    {
        for (auto& x : a_)
            if (!FieldTraits<F>::is_zero(x)) return false;
        return true;
    }

    F trace() const
    {
        F t(0L);
        for (size_t i = 0; i < std::min(r_, c_); ++i) t += (*this)(i, i);
        return t;
    }

    bool operator==(const DenseMatrix& o) const { return r_ == o.r_ && c_ == o.c_ && a_ == o.a_; }

    // stack rows of o below this
    DenseMatrix vstack(const DenseMatrix& o) const
    {
        DenseMatrix r(r_ + o.r_, c_);
        std::copy(a_.begin(), a_.end(), r.a_.begin());
        std::copy(o.a_.begin(), o.a_.end(), r.a_.begin() + a_.size());
        return r;
    }

private:
    size_t r_ = 0, c_ = 0;
    std::vector<F> a_;
};

// In-place reduced row echelon form; returns the pivot columns. Rows past the rank are zero.
template <class F>
std::vector<size_t> rref(DenseMatrix<F>& m)
{
    using FT = FieldTraits<F>;
    std::vector<size_t> piv;
    size_t row = 0;
    for (size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
        size_t p = row;
        while (p < m.rows() && FT::is_zero(m(p, col))) ++p;
        if (p == m.rows()) continue;
        if (p != row)
            for (size_t j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(row, j));
        F inv = FT::inverse(m(row, col));
        std::vector<size_t> nz;
        for (size_t j = col; j < m.cols(); ++j)
            if (!FT::is_zero(m(row, j))) {
                m(row, j) *= inv;
                nz.push_back(j);
            }
        for (size_t r = 0; r < m.rows(); ++r) {
            if (r == row || FT::is_zero(m(r, col))) continue;
            F f = m(r, col);
            for (size_t j : nz) m(r, j) -= f * m(row, j);
        }
        piv.push_back(col);
        ++row;
    }
    return piv;
}

template <class F>
size_t rank(DenseMatrix<F> m)
{
    return rref(m).size();
}

// basis of {x : m x = 0}
template <class F>
std::vector<std::vector<F>> nullspace(DenseMatrix<F> m)
{
    auto piv = rref(m);
    std::vector<bool> is_piv(m.cols(), false);
    for (size_t c : piv) is_piv[c] = true;
    std::vector<std::vector<F>> basis;
    for (size_t f = 0; f < m.cols(); ++f) {
        if (is_piv[f]) continue;
        std::vector<F> v(m.cols(), F(0L));
        v[f] = F(1L);
        for (size_t r = 0; r < piv.size(); ++r)
            if (!FieldTraits<F>::is_zero(m(r, f))) v[piv[r]] = -m(r, f);
        basis.push_back(std::move(v));
    }
    return basis;
}

// Row basis in reduced echelon form, with pivot columns.
template <class F>
struct EchelonBasis {
    std::vector<std::vector<F>> rows;
    std::vector<size_t> pivots;

    size_t size() const { return rows.size(); }

    // coordinates of v along the basis, if v lies in the span
    bool coordinates(const std::vector<F>& v, std::vector<F>& coords) const
    {
        coords.assign(rows.size(), F(0L));
        std::vector<F> res = v;
        for (size_t r = 0; r < rows.size(); ++r) {
            coords[r] = v[pivots[r]];
            if (FieldTraits<F>::is_zero(coords[r])) continue;
            for (size_t j = 0; j < res.size(); ++j)
                if (!FieldTraits<F>::is_zero(rows[r][j])) res[j] -= coords[r] * rows[r][j];
        }
        for (auto& x : res)
            if (!FieldTraits<F>::is_zero(x)) return false;
        return true;
    }
};

template <class F>
EchelonBasis<F> echelon_basis(const std::vector<std::vector<F>>& vecs, size_t dim)
{
    DenseMatrix<F> m(vecs.size(), dim);
    for (size_t i = 0; i < vecs.size(); ++i)
        for (size_t j = 0; j < dim; ++j) m(i, j) = vecs[i][j];
    EchelonBasis<F> b;
    b.pivots = rref(m);
    for (size_t r = 0; r < b.pivots.size(); ++r) {
        std::vector<F> row(dim);
        for (size_t j = 0; j < dim; ++j) row[j] = m(r, j);
        b.rows.push_back(std::move(row));
    }
    return b;
}

} // namespace tracekit
