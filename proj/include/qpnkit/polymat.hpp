#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "upoly.hpp"

namespace qpnkit {

/* Dense matrix over k[t].  Small sizes only; the callers that care about
 * performance live in the graded layer, not here. */
template <Field F>
struct PolyMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<UPoly<F>> e;

    PolyMatrix() = default;
    PolyMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), e(r * c) {}

    UPoly<F>& at(std::size_t i, std::size_t j) { return e[i * cols + j]; }
    const UPoly<F>& at(std::size_t i, std::size_t j) const { return e[i * cols + j]; }

    static PolyMatrix identity(const F& f, std::size_t n)
    {
        PolyMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            m.at(i, i) = up_one(f);
        return m;
    }
};

template <Field F>
bool pm_equal(const F& f, const PolyMatrix<F>& a, const PolyMatrix<F>& b)
{
    if (a.rows != b.rows || a.cols != b.cols)
        return false;
    for (std::size_t k = 0; k < a.e.size(); ++k)
        if (!up_eq(f, a.e[k], b.e[k]))
            return false;
    return true;
}

template <Field F>
PolyMatrix<F> pm_transpose(const PolyMatrix<F>& a)
{
    PolyMatrix<F> r(a.cols, a.rows);
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t j = 0; j < a.cols; ++j)
            r.at(j, i) = a.at(i, j);
    return r;
}

template <Field F>
PolyMatrix<F> pm_mul(const F& f, const PolyMatrix<F>& a, const PolyMatrix<F>& b)
{
    PolyMatrix<F> r(a.rows, b.cols);
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t k = 0; k < a.cols; ++k) {
            if (a.at(i, k).is_zero())
                continue;
            for (std::size_t j = 0; j < b.cols; ++j)
                if (!b.at(k, j).is_zero())
                    r.at(i, j) = up_add(f, r.at(i, j), up_mul(f, a.at(i, k), b.at(k, j)));
        }
    return r;
}

template <Field F>
PolyMatrix<F> pm_hstack(const PolyMatrix<F>& a, const PolyMatrix<F>& b)
{
    PolyMatrix<F> r(a.rows, a.cols + b.cols);
    for (std::size_t i = 0; i < a.rows; ++i) {
        for (std::size_t j = 0; j < a.cols; ++j)
            r.at(i, j) = a.at(i, j);
        for (std::size_t j = 0; j < b.cols; ++j)
            r.at(i, a.cols + j) = b.at(i, j);
    }
    return r;
}

template <Field F>
struct HermiteResult {
    PolyMatrix<F> h;  // canonical row echelon: monic pivots, shorter entries above
    PolyMatrix<F> u;  // unimodular, u * input == h
};

/* Row Hermite form over k[t].  Canonical: pivots monic, every entry above a
 * pivot has lower degree than the pivot.  Uniqueness of this form is what
 * makes span comparison a plain equality test. */
template <Field F>
HermiteResult<F> pm_hermite(const F& f, PolyMatrix<F> a)
{
    PolyMatrix<F> u = PolyMatrix<F>::identity(f, a.rows);
    auto row_sub = [&](std::size_t dst, std::size_t src, const UPoly<F>& q) {
        for (std::size_t j = 0; j < a.cols; ++j)
            a.at(dst, j) = up_sub(f, a.at(dst, j), up_mul(f, q, a.at(src, j)));
        for (std::size_t j = 0; j < u.cols; ++j)
            u.at(dst, j) = up_sub(f, u.at(dst, j), up_mul(f, q, u.at(src, j)));
    };
    auto row_swap = [&](std::size_t x, std::size_t y) {
        if (x == y)
            return;
        for (std::size_t j = 0; j < a.cols; ++j)
            std::swap(a.at(x, j), a.at(y, j));
        for (std::size_t j = 0; j < u.cols; ++j)
            std::swap(u.at(x, j), u.at(y, j));
    };
    auto row_scale = [&](std::size_t x, const typename F::Elt& s) {
        for (std::size_t j = 0; j < a.cols; ++j)
            a.at(x, j) = up_scale(f, s, a.at(x, j));
        for (std::size_t j = 0; j < u.cols; ++j)
            u.at(x, j) = up_scale(f, s, u.at(x, j));
    };

    std::size_t pivot_row = 0;
    for (std::size_t col = 0; col < a.cols && pivot_row < a.rows; ++col) {
        // Euclid on the column below pivot_row until one nonzero survives
        for (;;) {
            std::size_t best = a.rows;
            for (std::size_t i = pivot_row; i < a.rows; ++i)
                if (!a.at(i, col).is_zero() &&
                    (best == a.rows || a.at(i, col).degree() < a.at(best, col).degree()))
                    best = i;
            if (best == a.rows)
                break;  // column empty below
            bool reduced_any = false;
            for (std::size_t i = pivot_row; i < a.rows; ++i) {
                if (i == best || a.at(i, col).is_zero())
                    continue;
                auto [q, r] = up_divmod(f, a.at(i, col), a.at(best, col));
                (void)r;
                row_sub(i, best, q);
                reduced_any = true;
            }
            if (!reduced_any) {
                row_swap(pivot_row, best);
                break;
            }
        }
        if (a.at(pivot_row, col).is_zero())
            continue;
        row_scale(pivot_row, f.inv(a.at(pivot_row, col).c.back()));
        for (std::size_t i = 0; i < pivot_row; ++i) {
            if (a.at(i, col).is_zero())
                continue;
            auto [q, r] = up_divmod(f, a.at(i, col), a.at(pivot_row, col));
            (void)r;
            if (!q.is_zero())
                row_sub(i, pivot_row, q);
        }
        ++pivot_row;
    }
    return {std::move(a), std::move(u)};
}

template <Field F>
std::size_t pm_rank(const F& f, const PolyMatrix<F>& a)
{
    PolyMatrix<F> h = pm_hermite(f, a).h;
    std::size_t r = 0;
    for (std::size_t i = 0; i < h.rows; ++i)
        for (std::size_t j = 0; j < h.cols; ++j)
            if (!h.at(i, j).is_zero()) {
                ++r;
                break;
            }
    return r;
}

/* Basis of {x : a x = 0}, one kernel element per column.  Over k[t] the
 * kernel of a matrix between free modules is free, and the unimodular rows
 * of the Hermite transform that hit zero rows give a basis of it. */
template <Field F>
PolyMatrix<F> pm_right_kernel(const F& f, const PolyMatrix<F>& a)
{
    HermiteResult<F> hr = pm_hermite(f, pm_transpose(a));
    std::vector<std::size_t> zero_rows;
    for (std::size_t i = 0; i < hr.h.rows; ++i) {
        bool zero = true;
        for (std::size_t j = 0; j < hr.h.cols && zero; ++j)
            zero = hr.h.at(i, j).is_zero();
        if (zero)
            zero_rows.push_back(i);
    }
    PolyMatrix<F> ker(a.cols, zero_rows.size());
    for (std::size_t k = 0; k < zero_rows.size(); ++k)
        for (std::size_t j = 0; j < a.cols; ++j)
            ker.at(j, k) = hr.u.at(zero_rows[k], j);
    return ker;
}

/* Canonical basis matrix of the column span: column Hermite form with zero
 * columns dropped. */
template <Field F>
PolyMatrix<F> pm_column_span_canon(const F& f, const PolyMatrix<F>& a)
{
    PolyMatrix<F> h = pm_hermite(f, pm_transpose(a)).h;
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < h.rows; ++i)
        for (std::size_t j = 0; j < h.cols; ++j)
            if (!h.at(i, j).is_zero()) {
                keep.push_back(i);
                break;
            }
    PolyMatrix<F> r(a.rows, keep.size());
    for (std::size_t k = 0; k < keep.size(); ++k)
        for (std::size_t i = 0; i < a.rows; ++i)
            r.at(i, k) = h.at(keep[k], i);
    return r;
}

template <Field F>
bool pm_column_span_equal(const F& f, const PolyMatrix<F>& a, const PolyMatrix<F>& b)
{
    if (a.rows != b.rows)
        throw Error(ErrorKind::usage_error, "column span comparison needs equal row counts");
    return pm_equal(f, pm_column_span_canon(f, a), pm_column_span_canon(f, b));
}

/* colspan(x) subset of colspan(y)? */
template <Field F>
bool pm_span_contains(const F& f, const PolyMatrix<F>& y, const PolyMatrix<F>& x)
{
    if (x.rows != y.rows)
        throw Error(ErrorKind::usage_error, "span containment needs equal row counts");
    return pm_equal(f, pm_column_span_canon(f, y), pm_column_span_canon(f, pm_hstack(y, x)));
}

template <Field F>
struct SmithData {
    PolyMatrix<F> left;            // unimodular
    std::vector<UPoly<F>> diag;    // monic, each dividing the next
    PolyMatrix<F> right;           // unimodular; left * input * right == diag
};

/* Smith normal form over k[t] by alternating row/column reduction, pivot =
 * minimal-degree nonzero entry (lowest position on ties), with a divisibility
 * repair pass so the invariant factors come out in a chain. */
template <Field F>
SmithData<F> smith_normal_form(const F& f, PolyMatrix<F> a)
{
    const std::size_t rows = a.rows, cols = a.cols;
    PolyMatrix<F> left = PolyMatrix<F>::identity(f, rows);
    PolyMatrix<F> right = PolyMatrix<F>::identity(f, cols);

    auto row_sub = [&](std::size_t dst, std::size_t src, const UPoly<F>& q) {
        for (std::size_t j = 0; j < cols; ++j)
            a.at(dst, j) = up_sub(f, a.at(dst, j), up_mul(f, q, a.at(src, j)));
        for (std::size_t j = 0; j < rows; ++j)
            left.at(dst, j) = up_sub(f, left.at(dst, j), up_mul(f, q, left.at(src, j)));
    };
    auto col_sub = [&](std::size_t dst, std::size_t src, const UPoly<F>& q) {
        for (std::size_t i = 0; i < rows; ++i)
            a.at(i, dst) = up_sub(f, a.at(i, dst), up_mul(f, q, a.at(i, src)));
        for (std::size_t i = 0; i < cols; ++i)
            right.at(i, dst) = up_sub(f, right.at(i, dst), up_mul(f, q, right.at(i, src)));
    };
    auto row_swap = [&](std::size_t x, std::size_t y) {
        if (x == y)
            return;
        for (std::size_t j = 0; j < cols; ++j)
            std::swap(a.at(x, j), a.at(y, j));
        for (std::size_t j = 0; j < rows; ++j)
            std::swap(left.at(x, j), left.at(y, j));
    };
    auto col_swap = [&](std::size_t x, std::size_t y) {
        if (x == y)
            return;
        for (std::size_t i = 0; i < rows; ++i)
            std::swap(a.at(i, x), a.at(i, y));
        for (std::size_t i = 0; i < cols; ++i)
            std::swap(right.at(i, x), right.at(i, y));
    };

    const std::size_t steps = std::min(rows, cols);
    for (std::size_t k = 0; k < steps; ++k) {
        for (;;) {
            // minimal-degree nonzero pivot in the trailing block
            std::size_t pi = rows, pj = cols;
            for (std::size_t i = k; i < rows; ++i)
                for (std::size_t j = k; j < cols; ++j)
                    if (!a.at(i, j).is_zero() &&
                        (pi == rows || a.at(i, j).degree() < a.at(pi, pj).degree()))
                        pi = i, pj = j;
            if (pi == rows)
                goto done;  // trailing block is zero
            row_swap(k, pi);
            col_swap(k, pj);

            bool dirty = false;
            for (std::size_t i = k + 1; i < rows; ++i) {
                if (a.at(i, k).is_zero())
                    continue;
                auto [q, r] = up_divmod(f, a.at(i, k), a.at(k, k));
                row_sub(i, k, q);
                if (!r.is_zero())
                    dirty = true;
            }
            for (std::size_t j = k + 1; j < cols; ++j) {
                if (a.at(k, j).is_zero())
                    continue;
                auto [q, r] = up_divmod(f, a.at(k, j), a.at(k, k));
                col_sub(j, k, q);
                if (!r.is_zero())
                    dirty = true;
            }
            if (dirty)
                continue;  // remainders left; re-pick a smaller pivot

            // pivot must divide the whole trailing block
            bool repaired = false;
            for (std::size_t i = k + 1; i < rows && !repaired; ++i)
                for (std::size_t j = k + 1; j < cols && !repaired; ++j)
                    if (!up_divides(f, a.at(k, k), a.at(i, j))) {
                        row_sub(k, i, up_const(f, f.neg(f.one())));  // add row i to row k
                        repaired = true;
                    }
            if (!repaired)
                break;
        }
        // normalize pivot monic via a row scaling (unit determinant scaling)
        const auto s = f.inv(a.at(k, k).c.back());
        for (std::size_t j = 0; j < cols; ++j)
            a.at(k, j) = up_scale(f, s, a.at(k, j));
        for (std::size_t j = 0; j < rows; ++j)
            left.at(k, j) = up_scale(f, s, left.at(k, j));
    }
done:
    std::vector<UPoly<F>> diag;
    for (std::size_t k = 0; k < steps; ++k)
        if (!a.at(k, k).is_zero())
            diag.push_back(a.at(k, k));
    return {std::move(left), std::move(diag), std::move(right)};
}

/* Fraction-free determinant, used as an independent check on unimodularity. */
template <Field F>
UPoly<F> pm_det_bareiss(const F& f, PolyMatrix<F> a)
{
    if (a.rows != a.cols)
        throw Error(ErrorKind::usage_error, "determinant of a non-square matrix");
    const std::size_t n = a.rows;
    if (n == 0)
        return up_one(f);
    bool negate = false;
    UPoly<F> prev = up_one(f);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a.at(k, k).is_zero()) {
            std::size_t swap_row = k + 1;
            while (swap_row < n && a.at(swap_row, k).is_zero())
                ++swap_row;
            if (swap_row == n)
                return up_zero(f);
            for (std::size_t j = 0; j < n; ++j)
                std::swap(a.at(k, j), a.at(swap_row, j));
            negate = !negate;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j) {
                UPoly<F> num = up_sub(f, up_mul(f, a.at(i, j), a.at(k, k)),
                                      up_mul(f, a.at(i, k), a.at(k, j)));
                auto [q, r] = up_divmod(f, num, prev);
                if (!r.is_zero())
                    throw Error(ErrorKind::usage_error, "fraction-free elimination: inexact division");
                a.at(i, j) = std::move(q);
            }
        prev = a.at(k, k);
    }
    UPoly<F> det = a.at(n - 1, n - 1);
    return negate ? up_neg(f, det) : det;
}

}  // namespace qpnkit
