#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "fields.hpp"

namespace qpnkit {

/* Row-major dense matrix over a field object.  Shapes with zero rows or
 * columns are legal; ranks and kernels of those come out as expected. */
template <Field F>
struct DenseMatrix {
    using Elt = typename F::Elt;

    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<Elt> a;

    DenseMatrix() = default;

    DenseMatrix(const F& f, std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, f.zero()) {}

    Elt& at(std::size_t i, std::size_t j) { return a[i * cols + j]; }
    const Elt& at(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

    static DenseMatrix identity(const F& f, std::size_t n)
    {
        DenseMatrix m(f, n, n);
        for (std::size_t i = 0; i < n; ++i)
            m.at(i, i) = f.one();
        return m;
    }
};

template <Field F>
bool dm_equal(const F& f, const DenseMatrix<F>& x, const DenseMatrix<F>& y)
{
    if (x.rows != y.rows || x.cols != y.cols)
        return false;
    for (std::size_t k = 0; k < x.a.size(); ++k)
        if (!f.eq(x.a[k], y.a[k]))
            return false;
    return true;
}

template <Field F>
DenseMatrix<F> dm_mul(const F& f, const DenseMatrix<F>& x, const DenseMatrix<F>& y)
{
    DenseMatrix<F> r(f, x.rows, y.cols);
    for (std::size_t i = 0; i < x.rows; ++i)
        for (std::size_t k = 0; k < x.cols; ++k) {
            const auto& xik = x.at(i, k);
            if (f.is_zero(xik))
                continue;
            for (std::size_t j = 0; j < y.cols; ++j)
                r.at(i, j) = f.add(r.at(i, j), f.mul(xik, y.at(k, j)));
        }
    return r;
}

template <Field F>
DenseMatrix<F> dm_hstack(const F& f, const DenseMatrix<F>& x, const DenseMatrix<F>& y)
{
    DenseMatrix<F> r(f, x.rows, x.cols + y.cols);
    for (std::size_t i = 0; i < x.rows; ++i) {
        for (std::size_t j = 0; j < x.cols; ++j)
            r.at(i, j) = x.at(i, j);
        for (std::size_t j = 0; j < y.cols; ++j)
            r.at(i, x.cols + j) = y.at(i, j);
    }
    return r;
}

/* In-place reduced row echelon form; returns the pivot column per pivot row.
 * Pivot choice is the first nonzero entry scanning down, so the result is
 * deterministic for a given input. */
template <Field F>
std::vector<std::size_t> dm_rref(const F& f, DenseMatrix<F>& m)
{
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < m.cols && row < m.rows; ++col) {
        std::size_t piv = row;
        while (piv < m.rows && f.is_zero(m.at(piv, col)))
            ++piv;
        if (piv == m.rows)
            continue;
        if (piv != row)
            for (std::size_t j = 0; j < m.cols; ++j)
                std::swap(m.at(piv, j), m.at(row, j));
        const auto inv = f.inv(m.at(row, col));
        for (std::size_t j = col; j < m.cols; ++j)
            m.at(row, j) = f.mul(inv, m.at(row, j));
        for (std::size_t i = 0; i < m.rows; ++i) {
            if (i == row || f.is_zero(m.at(i, col)))
                continue;
            const auto factor = m.at(i, col);
            for (std::size_t j = col; j < m.cols; ++j)
                m.at(i, j) = f.sub(m.at(i, j), f.mul(factor, m.at(row, j)));
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

template <Field F>
std::size_t dm_rank(const F& f, DenseMatrix<F> m)
{
    return dm_rref(f, m).size();
}

/* Columns form a basis of the right kernel, in order of free column index. */
template <Field F>
DenseMatrix<F> dm_kernel_basis(const F& f, DenseMatrix<F> m)
{
    const std::vector<std::size_t> pivots = dm_rref(f, m);
    std::vector<bool> is_pivot(m.cols, false);
    for (std::size_t c : pivots)
        is_pivot[c] = true;

    DenseMatrix<F> ker(f, m.cols, m.cols - pivots.size());
    std::size_t out = 0;
    for (std::size_t free_col = 0; free_col < m.cols; ++free_col) {
        if (is_pivot[free_col])
            continue;
        ker.at(free_col, out) = f.one();
        for (std::size_t r = 0; r < pivots.size(); ++r)
            ker.at(pivots[r], out) = f.neg(m.at(r, free_col));
        ++out;
    }
    return ker;
}

/* One solution of A x = b, if any. */
template <Field F>
std::optional<std::vector<typename F::Elt>> dm_solve(const F& f, const DenseMatrix<F>& m,
                                                     const std::vector<typename F::Elt>& b)
{
    DenseMatrix<F> aug(f, m.rows, m.cols + 1);
    for (std::size_t i = 0; i < m.rows; ++i) {
        for (std::size_t j = 0; j < m.cols; ++j)
            aug.at(i, j) = m.at(i, j);
        aug.at(i, m.cols) = b[i];
    }
    const std::vector<std::size_t> pivots = dm_rref(f, aug);
    if (!pivots.empty() && pivots.back() == m.cols)
        return std::nullopt;  // a row (0 ... 0 | 1): inconsistent
    std::vector<typename F::Elt> x(m.cols, f.zero());
    for (std::size_t r = 0; r < pivots.size(); ++r)
        x[pivots[r]] = aug.at(r, m.cols);
    return x;
}

}  // namespace qpnkit
