#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dense.hpp"
#include "errors.hpp"
#include "fields.hpp"
#include "polymat.hpp"
#include "upoly.hpp"

namespace qpnkit {

/* Affine coefficient rings for the evaluation side: the base field k itself,
 * the univariate ring k[t], or a finite-dimensional commutative k-algebra
 * given by structure constants.  The field case is stored as the dim = 1
 * algebra so that every dimension-counting code path has one shape. */
enum class TargetKind { field, univariate, findim };

template <Field F>
struct TargetRing {
    TargetKind kind = TargetKind::field;
    F coeff;
    /* findim data; for a plain field this degenerates to dim = 1 with the
     * trivial multiplication table. */
    std::uint32_t dim = 1;
    std::vector<typename F::Elt> structure;  // structure[(i*dim + j)*dim + k] = coeff of e_k in e_i e_j
    std::vector<typename F::Elt> unit;       // coordinates of 1

    std::string name() const
    {
        switch (kind) {
        case TargetKind::field: return coeff.spec().name();
        case TargetKind::univariate: return coeff.spec().name() + "[t]";
        case TargetKind::findim: return "algebra(" + std::to_string(dim) + ")";
        }
        return "";
    }
};

template <Field F>
TargetRing<F> make_field_target(const F& f)
{
    return TargetRing<F>{TargetKind::field, f, 1, {f.one()}, {f.one()}};
}

template <Field F>
TargetRing<F> make_univariate_target(const F& f)
{
    return TargetRing<F>{TargetKind::univariate, f, 1, {}, {}};
}

/* Structure-constant algebra.  The table is trusted nowhere: commutativity,
 * unitality and associativity are all verified here, so downstream code can
 * assume an honest commutative ring. */
template <Field F>
TargetRing<F> make_findim_target(const F& f, std::uint32_t dim,
                                 std::vector<typename F::Elt> structure,
                                 std::vector<typename F::Elt> unit)
{
    if (dim == 0)
        throw Error(ErrorKind::invalid_ring, "algebra dimension must be positive");
    const std::size_t d = dim;
    if (structure.size() != d * d * d)
        throw Error(ErrorKind::invalid_ring, "algebra needs dim^3 structure constants, got " +
                                                 std::to_string(structure.size()));
    if (unit.size() != d)
        throw Error(ErrorKind::invalid_ring, "algebra unit vector has wrong length");

    auto c = [&](std::size_t i, std::size_t j, std::size_t k) -> const typename F::Elt& {
        return structure[(i * d + j) * d + k];
    };
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i + 1; j < d; ++j)
            for (std::size_t k = 0; k < d; ++k)
                if (!f.eq(c(i, j, k), c(j, i, k)))
                    throw Error(ErrorKind::invalid_ring,
                                "algebra multiplication is not commutative at e" + std::to_string(i) +
                                    "*e" + std::to_string(j));
    for (std::size_t j = 0; j < d; ++j)
        for (std::size_t k = 0; k < d; ++k) {
            typename F::Elt s = f.zero();
            for (std::size_t i = 0; i < d; ++i)
                s = f.add(s, f.mul(unit[i], c(i, j, k)));
            if (!f.eq(s, j == k ? f.one() : f.zero()))
                throw Error(ErrorKind::invalid_ring,
                            "algebra unit fails on basis vector e" + std::to_string(j));
        }
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            for (std::size_t l = 0; l < d; ++l)
                for (std::size_t k = 0; k < d; ++k) {
                    typename F::Elt lhs = f.zero(), rhs = f.zero();
                    for (std::size_t m = 0; m < d; ++m) {
                        lhs = f.add(lhs, f.mul(c(i, j, m), c(m, l, k)));
                        rhs = f.add(rhs, f.mul(c(j, l, m), c(i, m, k)));
                    }
                    if (!f.eq(lhs, rhs))
                        throw Error(ErrorKind::invalid_ring,
                                    "algebra multiplication is not associative at (e" +
                                        std::to_string(i) + ", e" + std::to_string(j) + ", e" +
                                        std::to_string(l) + ")");
                }

    return TargetRing<F>{TargetKind::findim, f, dim, std::move(structure), std::move(unit)};
}

/* Ring element.  Coefficient-vector conventions depend on the ring kind:
 * univariate elements are ascending t-power coefficients trimmed of trailing
 * zeros (zero = empty), field/findim elements hold exactly dim coordinates. */
template <Field F>
struct TElt {
    std::vector<typename F::Elt> c;
};

template <Field F>
TElt<F> t_zero(const TargetRing<F>& r)
{
    if (r.kind == TargetKind::univariate)
        return {};
    return {std::vector<typename F::Elt>(r.dim, r.coeff.zero())};
}

template <Field F>
TElt<F> t_from_scalar(const TargetRing<F>& r, const typename F::Elt& v)
{
    if (r.kind == TargetKind::univariate) {
        TElt<F> e;
        if (!r.coeff.is_zero(v))
            e.c.push_back(v);
        return e;
    }
    TElt<F> e = t_zero(r);
    for (std::uint32_t i = 0; i < r.dim; ++i)
        e.c[i] = r.coeff.mul(v, r.unit[i]);
    return e;
}

template <Field F>
TElt<F> t_one(const TargetRing<F>& r)
{
    return t_from_scalar(r, r.coeff.one());
}

template <Field F>
TElt<F> t_from_int(const TargetRing<F>& r, std::int64_t v)
{
    return t_from_scalar(r, r.coeff.from_int(v));
}

template <Field F>
bool t_is_zero(const TargetRing<F>& r, const TElt<F>& a)
{
    for (const auto& x : a.c)
        if (!r.coeff.is_zero(x))
            return false;
    return true;
}

template <Field F>
bool t_eq(const TargetRing<F>& r, const TElt<F>& a, const TElt<F>& b)
{
    const std::size_t n = std::max(a.c.size(), b.c.size());
    for (std::size_t i = 0; i < n; ++i) {
        const auto& x = i < a.c.size() ? a.c[i] : r.coeff.zero();
        const auto& y = i < b.c.size() ? b.c[i] : r.coeff.zero();
        if (!r.coeff.eq(x, y))
            return false;
    }
    return true;
}

namespace detail {

template <Field F>
void t_trim(const TargetRing<F>& r, TElt<F>& a)
{
    if (r.kind == TargetKind::univariate) {
        while (!a.c.empty() && r.coeff.is_zero(a.c.back()))
            a.c.pop_back();
    }
}

}  // namespace detail

template <Field F>
TElt<F> t_add(const TargetRing<F>& r, const TElt<F>& a, const TElt<F>& b)
{
    TElt<F> s;
    s.c.resize(std::max(a.c.size(), b.c.size()), r.coeff.zero());
    for (std::size_t i = 0; i < a.c.size(); ++i)
        s.c[i] = a.c[i];
    for (std::size_t i = 0; i < b.c.size(); ++i)
        s.c[i] = r.coeff.add(s.c[i], b.c[i]);
    detail::t_trim(r, s);
    return s;
}

template <Field F>
TElt<F> t_neg(const TargetRing<F>& r, const TElt<F>& a)
{
    TElt<F> s = a;
    for (auto& x : s.c)
        x = r.coeff.neg(x);
    return s;
}

template <Field F>
TElt<F> t_sub(const TargetRing<F>& r, const TElt<F>& a, const TElt<F>& b)
{
    return t_add(r, a, t_neg(r, b));
}

template <Field F>
TElt<F> t_scale(const TargetRing<F>& r, const typename F::Elt& s, const TElt<F>& a)
{
    TElt<F> out = a;
    for (auto& x : out.c)
        x = r.coeff.mul(s, x);
    detail::t_trim(r, out);
    return out;
}

template <Field F>
TElt<F> t_mul(const TargetRing<F>& r, const TElt<F>& a, const TElt<F>& b)
{
    const F& f = r.coeff;
    if (r.kind == TargetKind::univariate) {
        if (a.c.empty() || b.c.empty())
            return {};
        TElt<F> p;
        p.c.assign(a.c.size() + b.c.size() - 1, f.zero());
        for (std::size_t i = 0; i < a.c.size(); ++i)
            for (std::size_t j = 0; j < b.c.size(); ++j)
                p.c[i + j] = f.add(p.c[i + j], f.mul(a.c[i], b.c[j]));
        detail::t_trim(r, p);
        return p;
    }
    const std::size_t d = r.dim;
    TElt<F> p = t_zero(r);
    for (std::size_t i = 0; i < d; ++i) {
        if (f.is_zero(a.c[i]))
            continue;
        for (std::size_t j = 0; j < d; ++j) {
            if (f.is_zero(b.c[j]))
                continue;
            const auto ab = f.mul(a.c[i], b.c[j]);
            for (std::size_t k = 0; k < d; ++k) {
                const auto& s = r.structure[(i * d + j) * d + k];
                if (!f.is_zero(s))
                    p.c[k] = f.add(p.c[k], f.mul(ab, s));
            }
        }
    }
    return p;
}

/* Matrix over the ring whose k-coordinates form the operator "multiply by a":
 * column b holds the coordinates of a * e_b. */
template <Field F>
DenseMatrix<F> t_mult_operator(const TargetRing<F>& r, const TElt<F>& a)
{
    const F& f = r.coeff;
    const std::size_t d = r.dim;
    DenseMatrix<F> L(f, d, d);
    for (std::size_t b = 0; b < d; ++b)
        for (std::size_t k = 0; k < d; ++k) {
            typename F::Elt s = f.zero();
            for (std::size_t i = 0; i < d; ++i)
                s = f.add(s, f.mul(a.c[i], r.structure[(i * d + b) * d + k]));
            L.at(k, b) = s;
        }
    return L;
}

template <Field F>
bool t_is_unit(const TargetRing<F>& r, const TElt<F>& a)
{
    if (r.kind == TargetKind::univariate)
        return a.c.size() == 1;
    return dm_solve(r.coeff, t_mult_operator(r, a), r.unit).has_value();
}

template <Field F>
std::optional<TElt<F>> t_inverse(const TargetRing<F>& r, const TElt<F>& a)
{
    if (r.kind == TargetKind::univariate) {
        if (a.c.size() != 1)
            return std::nullopt;
        return TElt<F>{{r.coeff.inv(a.c[0])}};
    }
    auto x = dm_solve(r.coeff, t_mult_operator(r, a), r.unit);
    if (!x)
        return std::nullopt;
    return TElt<F>{std::move(*x)};
}

template <Field F>
UPoly<F> t_to_poly(const TargetRing<F>& r, const TElt<F>& a)
{
    if (r.kind != TargetKind::univariate)
        throw Error(ErrorKind::usage_error, "element of " + r.name() + " is not a polynomial");
    return UPoly<F>{a.c};
}

template <Field F>
TElt<F> t_from_poly(const TargetRing<F>& r, UPoly<F> p)
{
    if (r.kind != TargetKind::univariate)
        throw Error(ErrorKind::usage_error, "polynomial element in non-polynomial ring " + r.name());
    return TElt<F>{std::move(p.c)};
}

template <Field F>
std::string t_to_string(const TargetRing<F>& r, const TElt<F>& a)
{
    switch (r.kind) {
    case TargetKind::univariate:
        return up_to_string(r.coeff, UPoly<F>{a.c});
    case TargetKind::field:
        return r.coeff.to_string(a.c[0]);
    case TargetKind::findim: {
        std::string s = "(";
        for (std::uint32_t i = 0; i < r.dim; ++i) {
            if (i)
                s += ", ";
            s += r.coeff.to_string(a.c[i]);
        }
        return s + ")";
    }
    }
    return "";
}

template <Field F>
struct TMatrix {
    std::uint32_t rows = 0, cols = 0;
    std::vector<TElt<F>> e;  // row-major

    TElt<F>& at(std::size_t i, std::size_t j) { return e[i * cols + j]; }
    const TElt<F>& at(std::size_t i, std::size_t j) const { return e[i * cols + j]; }
};

template <Field F>
TMatrix<F> tm_zero(const TargetRing<F>& r, std::uint32_t rows, std::uint32_t cols)
{
    TMatrix<F> m;
    m.rows = rows;
    m.cols = cols;
    m.e.assign(static_cast<std::size_t>(rows) * cols, t_zero(r));
    return m;
}

template <Field F>
TMatrix<F> tm_identity(const TargetRing<F>& r, std::uint32_t n)
{
    TMatrix<F> m = tm_zero(r, n, n);
    for (std::uint32_t i = 0; i < n; ++i)
        m.at(i, i) = t_one(r);
    return m;
}

template <Field F>
bool tm_equal(const TargetRing<F>& r, const TMatrix<F>& a, const TMatrix<F>& b)
{
    if (a.rows != b.rows || a.cols != b.cols)
        return false;
    for (std::size_t i = 0; i < a.e.size(); ++i)
        if (!t_eq(r, a.e[i], b.e[i]))
            return false;
    return true;
}

template <Field F>
TMatrix<F> tm_mul(const TargetRing<F>& r, const TMatrix<F>& a, const TMatrix<F>& b)
{
    if (a.cols != b.rows)
        throw Error(ErrorKind::usage_error, "matrix shape mismatch in product");
    TMatrix<F> p = tm_zero(r, a.rows, b.cols);
    for (std::uint32_t i = 0; i < a.rows; ++i)
        for (std::uint32_t k = 0; k < a.cols; ++k) {
            if (t_is_zero(r, a.at(i, k)))
                continue;
            for (std::uint32_t j = 0; j < b.cols; ++j)
                p.at(i, j) = t_add(r, p.at(i, j), t_mul(r, a.at(i, k), b.at(k, j)));
        }
    return p;
}

template <Field F>
TMatrix<F> tm_sub(const TargetRing<F>& r, const TMatrix<F>& a, const TMatrix<F>& b)
{
    if (a.rows != b.rows || a.cols != b.cols)
        throw Error(ErrorKind::usage_error, "matrix shape mismatch in difference");
    TMatrix<F> s = a;
    for (std::size_t i = 0; i < s.e.size(); ++i)
        s.e[i] = t_sub(r, s.e[i], b.e[i]);
    return s;
}

template <Field F>
TMatrix<F> tm_hstack(const TMatrix<F>& a, const TMatrix<F>& b)
{
    if (a.rows != b.rows)
        throw Error(ErrorKind::usage_error, "matrix row mismatch in juxtaposition");
    TMatrix<F> m;
    m.rows = a.rows;
    m.cols = a.cols + b.cols;
    m.e.reserve(static_cast<std::size_t>(m.rows) * m.cols);
    for (std::uint32_t i = 0; i < m.rows; ++i) {
        for (std::uint32_t j = 0; j < a.cols; ++j)
            m.e.push_back(a.at(i, j));
        for (std::uint32_t j = 0; j < b.cols; ++j)
            m.e.push_back(b.at(i, j));
    }
    return m;
}

/* Kronecker product with row (i, j) at index i*b.rows + j, matching the
 * generator order of tensor products of modules. */
template <Field F>
TMatrix<F> tm_kron(const TargetRing<F>& r, const TMatrix<F>& a, const TMatrix<F>& b)
{
    TMatrix<F> m = tm_zero(r, a.rows * b.rows, a.cols * b.cols);
    for (std::uint32_t i = 0; i < a.rows; ++i)
        for (std::uint32_t k = 0; k < a.cols; ++k) {
            if (t_is_zero(r, a.at(i, k)))
                continue;
            for (std::uint32_t j = 0; j < b.rows; ++j)
                for (std::uint32_t l = 0; l < b.cols; ++l)
                    m.at(i * b.rows + j, k * b.cols + l) = t_mul(r, a.at(i, k), b.at(j, l));
        }
    return m;
}

template <Field F>
PolyMatrix<F> tm_to_poly(const TargetRing<F>& r, const TMatrix<F>& m)
{
    PolyMatrix<F> p(m.rows, m.cols);
    for (std::uint32_t i = 0; i < m.rows; ++i)
        for (std::uint32_t j = 0; j < m.cols; ++j)
            p.at(i, j) = t_to_poly(r, m.at(i, j));
    return p;
}

template <Field F>
TMatrix<F> tm_from_poly(const TargetRing<F>& r, const PolyMatrix<F>& p)
{
    TMatrix<F> m = tm_zero(r, p.rows, p.cols);
    for (std::uint32_t i = 0; i < p.rows; ++i)
        for (std::uint32_t j = 0; j < p.cols; ++j)
            m.at(i, j) = t_from_poly(r, p.at(i, j));
    return m;
}

/* Coefficient expansion for field and findim targets: each entry becomes its
 * dim x dim multiplication block, so the T-linear map T^cols -> T^rows turns
 * into the underlying k-linear map on coordinate spaces.  T-column-spans
 * become k-column-spans because the expanded block of a column c consists of
 * the coordinate vectors of c * e_b. */
template <Field F>
DenseMatrix<F> tm_expand(const TargetRing<F>& r, const TMatrix<F>& m)
{
    if (r.kind == TargetKind::univariate)
        throw Error(ErrorKind::usage_error, "coefficient expansion over " + r.name());
    const std::size_t d = r.dim;
    DenseMatrix<F> out(r.coeff, m.rows * d, m.cols * d);
    for (std::uint32_t i = 0; i < m.rows; ++i)
        for (std::uint32_t j = 0; j < m.cols; ++j) {
            if (t_is_zero(r, m.at(i, j)))
                continue;
            DenseMatrix<F> block = t_mult_operator(r, m.at(i, j));
            for (std::size_t k = 0; k < d; ++k)
                for (std::size_t b = 0; b < d; ++b)
                    out.at(i * d + k, j * d + b) = block.at(k, b);
        }
    return out;
}

/* Finitely presented module: `rank` generators modulo the columns of `rels`. */
template <Field F>
struct TModule {
    std::uint32_t rank = 0;
    TMatrix<F> rels;  // rank rows, one column per relation
};

template <Field F>
TModule<F> tmod_free(const TargetRing<F>& r, std::uint32_t rank)
{
    TModule<F> m;
    m.rank = rank;
    m.rels = tm_zero(r, rank, 0);
    return m;
}

/* Columns of x inside the T-span of the columns of y (same row count). */
template <Field F>
bool t_span_contains(const TargetRing<F>& r, const TMatrix<F>& y, const TMatrix<F>& x)
{
    if (y.rows != x.rows)
        throw Error(ErrorKind::usage_error, "span comparison row mismatch");
    if (r.kind == TargetKind::univariate)
        return pm_span_contains(r.coeff, tm_to_poly(r, y), tm_to_poly(r, x));
    DenseMatrix<F> ey = tm_expand(r, y);
    return dm_rank(r.coeff, ey) == dm_rank(r.coeff, dm_hstack(r.coeff, ey, tm_expand(r, x)));
}

template <Field F>
bool t_span_equal(const TargetRing<F>& r, const TMatrix<F>& a, const TMatrix<F>& b)
{
    if (r.kind == TargetKind::univariate)
        return pm_column_span_equal(r.coeff, tm_to_poly(r, a), tm_to_poly(r, b));
    return t_span_contains(r, a, b) && t_span_contains(r, b, a);
}

/* Torsion/free classification over k[t], from the Smith normal form of the
 * presentation. */
template <Field F>
struct UnivariateClass {
    std::vector<UPoly<F>> torsion;  // nonunit invariant factors, monic, each dividing the next
    std::uint32_t free_rank = 0;
};

template <Field F>
UnivariateClass<F> univariate_class(const TargetRing<F>& r, const TModule<F>& m)
{
    if (r.kind != TargetKind::univariate)
        throw Error(ErrorKind::usage_error, "invariant factors over " + r.name());
    SmithData<F> snf = smith_normal_form(r.coeff, tm_to_poly(r, m.rels));
    UnivariateClass<F> out;
    out.free_rank = m.rank - static_cast<std::uint32_t>(snf.diag.size());
    for (auto& d : snf.diag)
        if (d.degree() > 0)
            out.torsion.push_back(std::move(d));
    return out;
}

/* Dimension over the coefficient field, for field and findim targets. */
template <Field F>
std::uint32_t k_dimension(const TargetRing<F>& r, const TModule<F>& m)
{
    if (r.kind == TargetKind::univariate)
        throw Error(ErrorKind::usage_error, "k-dimension over " + r.name());
    DenseMatrix<F> e = tm_expand(r, m.rels);
    return m.rank * r.dim - dm_rank(r.coeff, e);
}

/* Tensor product of presentations.  Generators are pairs (i, j) at index
 * i*n.rank + j; the relation block order (left relations spread over right
 * generators first) matches the graded-module tensor product, so evaluation
 * commutes with tensoring on the nose, not just up to column shuffles. */
template <Field F>
TModule<F> t_tensor(const TargetRing<F>& r, const TModule<F>& m, const TModule<F>& n)
{
    TModule<F> out;
    out.rank = m.rank * n.rank;
    out.rels = tm_hstack(tm_kron(r, m.rels, tm_identity(r, n.rank)),
                         tm_kron(r, tm_identity(r, m.rank), n.rels));
    return out;
}

/* Map of finitely presented modules, given on generators. */
template <Field F>
struct TMap {
    TModule<F> src, dst;
    TMatrix<F> matrix;  // dst.rank x src.rank
};

template <Field F>
TMap<F> make_tmap(const TargetRing<F>& r, TModule<F> src, TModule<F> dst, TMatrix<F> matrix)
{
    if (matrix.rows != dst.rank || matrix.cols != src.rank)
        throw Error(ErrorKind::ill_defined_map, "map matrix shape does not match the presentations");
    if (!t_span_contains(r, dst.rels, tm_mul(r, matrix, src.rels)))
        throw Error(ErrorKind::ill_defined_map,
                    "a source relation does not map into the target relations");
    return TMap<F>{std::move(src), std::move(dst), std::move(matrix)};
}

/* Cokernel presentation: target generators modulo the target relations
 * together with the image columns. */
template <Field F>
TModule<F> t_cokernel(const TMap<F>& f)
{
    TModule<F> out;
    out.rank = f.dst.rank;
    out.rels = tm_hstack(f.dst.rels, f.matrix);
    return out;
}

/* Bijectivity verdicts.  Over k[t] the two procedures below are the single
 * source of truth for maps between finitely presented modules:
 *
 *   surjective: form C = [G | R_dst], the generator images next to the target
 *   relations.  The map is onto iff coker C = 0, iff the Smith normal form of
 *   C has dst.rank invariant factors, all of them units.
 *
 *   injective: a generator combination x maps to zero iff G x lies in
 *   span R_dst, iff (x, y) is in ker [G | R_dst] for some y.  The map is
 *   injective iff the x-projection of that kernel lies in span R_src, checked
 *   by Hermite span containment.
 *
 * Field and findim targets run the same two procedures on the expanded
 * coefficient matrices, where rank counting replaces normal forms. */
template <Field F>
bool tmap_surjective(const TargetRing<F>& r, const TMap<F>& f)
{
    TMatrix<F> c = tm_hstack(f.matrix, f.dst.rels);
    if (r.kind == TargetKind::univariate) {
        SmithData<F> snf = smith_normal_form(r.coeff, tm_to_poly(r, c));
        if (snf.diag.size() != f.dst.rank)
            return false;
        for (const auto& d : snf.diag)
            if (d.degree() != 0)
                return false;
        return true;
    }
    return dm_rank(r.coeff, tm_expand(r, c)) == f.dst.rank * r.dim;
}

template <Field F>
bool tmap_injective(const TargetRing<F>& r, const TMap<F>& f)
{
    TMatrix<F> c = tm_hstack(f.matrix, f.dst.rels);
    if (r.kind == TargetKind::univariate) {
        PolyMatrix<F> k = pm_right_kernel(r.coeff, tm_to_poly(r, c));
        PolyMatrix<F> x(f.src.rank, k.cols);
        for (std::uint32_t i = 0; i < f.src.rank; ++i)
            for (std::uint32_t j = 0; j < k.cols; ++j)
                x.at(i, j) = k.at(i, j);
        return pm_span_contains(r.coeff, tm_to_poly(r, f.src.rels), x);
    }
    DenseMatrix<F> k = dm_kernel_basis(r.coeff, tm_expand(r, c));
    const std::size_t xr = static_cast<std::size_t>(f.src.rank) * r.dim;
    DenseMatrix<F> x(r.coeff, xr, k.cols);
    for (std::size_t i = 0; i < xr; ++i)
        for (std::size_t j = 0; j < k.cols; ++j)
            x.at(i, j) = k.at(i, j);
    DenseMatrix<F> rs = tm_expand(r, f.src.rels);
    return dm_rank(r.coeff, rs) == dm_rank(r.coeff, dm_hstack(r.coeff, rs, x));
}

template <Field F>
bool tmap_bijective(const TargetRing<F>& r, const TMap<F>& f)
{
    return tmap_surjective(r, f) && tmap_injective(r, f);
}

}  // namespace qpnkit
