#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "graded.hpp"
#include "hompoly.hpp"
#include "koszul.hpp"
#include "target.hpp"

namespace qpnkit {

/* A rank-one bundle on projective n-space pulled back to an affine target is
 * free, so the classifying data reduces to the ring together with the n+1
 * section images of x_0, ..., x_n. */
template <Field F>
struct SectionData {
    TargetRing<F> ring;
    std::uint32_t n = 0;
    std::vector<TElt<F>> sections;  // length n+1
};

template <Field F>
SectionData<F> make_sections(TargetRing<F> ring, std::vector<TElt<F>> sections)
{
    if (sections.empty())
        throw Error(ErrorKind::usage_error, "need at least one section");
    std::uint32_t n = static_cast<std::uint32_t>(sections.size()) - 1;
    return SectionData<F>{std::move(ring), n, std::move(sections)};
}

/* x_i -> s_i, the ring map that drives the whole evaluation functor. */
template <Field F>
TElt<F> substitute(const SectionData<F>& sd, const HomPoly<F>& p)
{
    if (!p.is_zero() && p.nvars != sd.n + 1)
        throw Error(ErrorKind::usage_error, "polynomial has " + std::to_string(p.nvars) +
                                                " variables, sections cover " +
                                                std::to_string(sd.n + 1));
    const TargetRing<F>& r = sd.ring;
    return hp_substitute(
        r.coeff, p, sd.sections, t_zero(r),
        [&](const TElt<F>& x, const TElt<F>& y) { return t_add(r, x, y); },
        [&](const TElt<F>& x, const TElt<F>& y) { return t_mul(r, x, y); },
        [&](const typename F::Elt& c) { return t_from_scalar(r, c); });
}

template <Field F>
bool verify_relation(const SectionData<F>& sd, const HomPoly<F>& rel)
{
    return t_is_zero(sd.ring, substitute(sd, rel));
}

/* The section-side Koszul matrix: one column per pair (i, j) with i < j in
 * lexicographic order, sending e_{i,j} to s_i e_j - s_j e_i.  Its columns
 * always lie in the kernel of the row (s_0 ... s_n); the good-epi question is
 * whether they fill it. */
template <Field F>
TMatrix<F> section_koszul(const SectionData<F>& sd)
{
    const std::uint32_t m = sd.n + 1;
    TMatrix<F> k = tm_zero(sd.ring, m, m * (m - 1) / 2);
    std::uint32_t col = 0;
    for (std::uint32_t i = 0; i < m; ++i)
        for (std::uint32_t j = i + 1; j < m; ++j, ++col) {
            k.at(j, col) = sd.sections[i];
            k.at(i, col) = t_neg(sd.ring, sd.sections[j]);
        }
    return k;
}

template <Field F>
struct GoodEpiVerdict {
    bool epi = false;
    bool middle_exact = false;
    std::vector<TElt<F>> bezout;          // when epi: sum bezout[i] * s_i = 1
    std::optional<UPoly<F>> gcd_witness;  // univariate epi failure: the common factor
    std::vector<TElt<F>> syzygy_witness;  // middle failure: kernel vector outside the Koszul span
    std::string note;                     // empty unless some check failed

    bool good() const { return epi && middle_exact; }
};

template <Field F>
GoodEpiVerdict<F> check_good_epi(const SectionData<F>& sd)
{
    const TargetRing<F>& r = sd.ring;
    const F& f = r.coeff;
    const std::uint32_t m = sd.n + 1;
    GoodEpiVerdict<F> v;

    TMatrix<F> row = tm_zero(r, 1, m);
    for (std::uint32_t i = 0; i < m; ++i)
        row.at(0, i) = sd.sections[i];
    TMatrix<F> koszul = section_koszul(sd);

    if (r.kind == TargetKind::univariate) {
        // running extended gcd, carrying the certificate along
        UPoly<F> g = t_to_poly(r, sd.sections[0]);
        std::vector<UPoly<F>> coef(m, up_zero(f));
        coef[0] = up_one(f);
        for (std::uint32_t i = 1; i < m; ++i) {
            ExtGcd<F> step = up_gcd_ext(f, g, t_to_poly(r, sd.sections[i]));
            for (std::uint32_t j = 0; j < i; ++j)
                coef[j] = up_mul(f, coef[j], step.u);
            coef[i] = step.v;
            g = std::move(step.g);
        }
        if (g.degree() == 0) {
            v.epi = true;  // g is monic, hence exactly 1
            for (auto& c : coef)
                v.bezout.push_back(t_from_poly(r, std::move(c)));
        } else {
            v.gcd_witness = std::move(g);
            v.note = v.gcd_witness->is_zero() ? "all sections are zero"
                                             : "sections share the factor " +
                                                   up_to_string(f, *v.gcd_witness);
        }

        PolyMatrix<F> prow = tm_to_poly(r, row);
        PolyMatrix<F> pk = tm_to_poly(r, koszul);
        PolyMatrix<F> ker = pm_right_kernel(f, prow);
        v.middle_exact = true;
        for (std::size_t c = 0; c < ker.cols && v.middle_exact; ++c) {
            PolyMatrix<F> one(ker.rows, 1);
            for (std::size_t i = 0; i < ker.rows; ++i)
                one.at(i, 0) = ker.at(i, c);
            if (!pm_span_contains(f, pk, one)) {
                v.middle_exact = false;
                for (std::size_t i = 0; i < ker.rows; ++i)
                    v.syzygy_witness.push_back(t_from_poly(r, one.at(i, 0)));
                v.note += std::string(v.note.empty() ? "" : "; ") +
                          "a syzygy escapes the Koszul columns";
            }
        }
        return v;
    }

    // field / findim: everything is linear algebra over the coefficient field
    DenseMatrix<F> erow = tm_expand(r, row);
    auto sol = dm_solve(f, erow, r.unit);
    if (sol) {
        v.epi = true;
        for (std::uint32_t i = 0; i < m; ++i) {
            TElt<F> a;
            a.c.assign(sol->begin() + i * r.dim, sol->begin() + (i + 1) * r.dim);
            v.bezout.push_back(std::move(a));
        }
    } else {
        v.note = "sections do not generate the unit ideal";
    }

    DenseMatrix<F> ker = dm_kernel_basis(f, erow);
    DenseMatrix<F> ek = tm_expand(r, koszul);
    const std::size_t krank = dm_rank(f, ek);
    v.middle_exact = true;
    for (std::size_t c = 0; c < ker.cols; ++c) {
        DenseMatrix<F> one(f, ker.rows, 1);
        for (std::size_t i = 0; i < ker.rows; ++i)
            one.at(i, 0) = ker.at(i, c);
        if (dm_rank(f, dm_hstack(f, ek, one)) != krank) {
            v.middle_exact = false;
            for (std::uint32_t i = 0; i < m; ++i) {
                TElt<F> a;
                a.c.assign(one.a.begin() + i * r.dim, one.a.begin() + (i + 1) * r.dim);
                v.syzygy_witness.push_back(std::move(a));
            }
            v.note += std::string(v.note.empty() ? "" : "; ") +
                      "a syzygy escapes the Koszul columns";
            break;
        }
    }
    return v;
}

/* Evaluation on objects: each twist S(b) goes to the free rank-one module
 * (the bundle trivializes over an affine target, the twist surviving only as
 * bookkeeping), and relation entries are pushed through x_i -> s_i. */
template <Field F>
TModule<F> evaluate_object(const SectionData<F>& sd, const FPGradedModule<F>& m)
{
    if (m.nvars != sd.n + 1)
        throw Error(ErrorKind::usage_error, "module lives over " + std::to_string(m.nvars) +
                                                " variables, sections cover " +
                                                std::to_string(sd.n + 1));
    TModule<F> out;
    out.rank = static_cast<std::uint32_t>(m.gens.rank());
    out.rels = tm_zero(sd.ring, out.rank, static_cast<std::uint32_t>(m.rels.source.rank()));
    for (std::uint32_t i = 0; i < out.rels.rows; ++i)
        for (std::uint32_t c = 0; c < out.rels.cols; ++c)
            out.rels.at(i, c) = substitute(sd, m.rels.at(i, c));
    return out;
}

/* Evaluation on maps.  Well-definedness transports: the polynomial identity
 * exhibiting matrix * src.rels inside the span of dst.rels is itself pushed
 * through the substitution, so no fresh membership check is needed. */
template <Field F>
TMap<F> evaluate_map(const SectionData<F>& sd, const GradedModuleMap<F>& f)
{
    TMap<F> out;
    out.src = evaluate_object(sd, f.src);
    out.dst = evaluate_object(sd, f.dst);
    out.matrix = tm_zero(sd.ring, out.dst.rank, out.src.rank);
    for (std::uint32_t i = 0; i < out.matrix.rows; ++i)
        for (std::uint32_t j = 0; j < out.matrix.cols; ++j)
            out.matrix.at(i, j) = substitute(sd, f.matrix.at(i, j));
    return out;
}

namespace detail {

template <Field F>
void require_good(const SectionData<F>& sd, const GoodEpiVerdict<F>& v)
{
    if (!v.good())
        throw Error(ErrorKind::precondition_not_good,
                    "sections over " + sd.ring.name() + " are not a good epimorphism" +
                        (v.note.empty() ? "" : ": " + v.note));
}

}  // namespace detail

/* Whether the truncation inclusion S(d)_{>=a} into S(d) becomes invertible
 * after evaluation.  The verdict is exact: Smith normal forms over k[t],
 * rank counting over field/findim targets. */
template <Field F>
bool check_truncation_iso(const SectionData<F>& sd, int d, int a)
{
    detail::require_good(sd, check_good_epi(sd));
    if (a + d < 0)
        return true;  // the truncation is the whole module and the inclusion the identity
    TruncationPresentation<F> pres = truncation_presentation(sd.ring.coeff, sd.n, a, d);
    return tmap_bijective(sd.ring, evaluate_map(sd, pres.inclusion));
}

/* The comparison F(m) (x) F(n) -> F(m (x) n) is the identity on generator
 * labels, because the tensor presentations on both sides list their relation
 * columns in the same order.  Bijectivity therefore reduces to equality of
 * relation spans. */
template <Field F>
bool check_monoidality(const SectionData<F>& sd, const FPGradedModule<F>& a,
                       const FPGradedModule<F>& b)
{
    TModule<F> lhs = t_tensor(sd.ring, evaluate_object(sd, a), evaluate_object(sd, b));
    TModule<F> rhs = evaluate_object(sd, tensor(sd.ring.coeff, a, b));
    return lhs.rank == rhs.rank && t_span_equal(sd.ring, lhs.rels, rhs.rels);
}

/* One affine chart per section that can be inverted; coordinates stay exact
 * fraction pairs (numerator s_j, denominator s_i). */
template <Field F>
struct Chart {
    std::uint32_t index = 0;
    std::vector<std::pair<TElt<F>, TElt<F>>> coords;
};

template <Field F>
struct ChartMap {
    std::vector<Chart<F>> charts;
    std::vector<TElt<F>> cover_certificate;  // sum certificate[i] * s_i = 1
};

template <Field F>
ChartMap<F> reconstruct_morphism(const SectionData<F>& sd)
{
    GoodEpiVerdict<F> v = check_good_epi(sd);
    detail::require_good(sd, v);
    const TargetRing<F>& r = sd.ring;
    const std::uint32_t m = sd.n + 1;

    auto chart_at = [&](std::uint32_t i) {
        Chart<F> c;
        c.index = i;
        for (std::uint32_t j = 0; j < m; ++j)
            c.coords.emplace_back(sd.sections[j], sd.sections[i]);
        return c;
    };

    ChartMap<F> out;
    for (std::uint32_t i = 0; i < m; ++i)
        if (t_is_unit(r, sd.sections[i])) {
            // one globally invertible section covers everything by itself
            out.charts.push_back(chart_at(i));
            out.cover_certificate.assign(m, t_zero(r));
            out.cover_certificate[i] = *t_inverse(r, sd.sections[i]);
            return out;
        }
    for (std::uint32_t i = 0; i < m; ++i)
        if (!t_is_zero(r, sd.sections[i]))
            out.charts.push_back(chart_at(i));
    out.cover_certificate = v.bezout;
    return out;
}

/* Ring map between affine targets, given on generators: nothing for a field
 * source, the image of t for k[t], the images of the basis vectors for a
 * structure-constant algebra.  Multiplicativity and unitality of the latter
 * are verified here. */
template <Field F>
struct RingMap {
    TargetRing<F> src, dst;
    std::vector<TElt<F>> images;
};

template <Field F>
RingMap<F> make_ring_map(TargetRing<F> src, TargetRing<F> dst, std::vector<TElt<F>> images)
{
    if (!(src.coeff.spec() == dst.coeff.spec()))
        throw Error(ErrorKind::invalid_ring_map, "coefficient fields differ");
    switch (src.kind) {
    case TargetKind::field:
        if (!images.empty())
            throw Error(ErrorKind::invalid_ring_map, "a field source has no generators");
        break;
    case TargetKind::univariate:
        if (images.size() != 1)
            throw Error(ErrorKind::invalid_ring_map, "k[t] has exactly one generator");
        break;
    case TargetKind::findim: {
        if (images.size() != src.dim)
            throw Error(ErrorKind::invalid_ring_map,
                        "need one image per algebra basis vector, got " +
                            std::to_string(images.size()));
        const F& f = src.coeff;
        const std::size_t d = src.dim;
        TElt<F> one_img = t_zero(dst);
        for (std::size_t i = 0; i < d; ++i)
            one_img = t_add(dst, one_img, t_scale(dst, src.unit[i], images[i]));
        if (!t_eq(dst, one_img, t_one(dst)))
            throw Error(ErrorKind::invalid_ring_map, "unit is not sent to the unit");
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = i; j < d; ++j) {
                TElt<F> lhs = t_mul(dst, images[i], images[j]);
                TElt<F> rhs = t_zero(dst);
                for (std::size_t k = 0; k < d; ++k)
                    rhs = t_add(dst, rhs,
                                t_scale(dst, src.structure[(i * d + j) * d + k], images[k]));
                if (!t_eq(dst, lhs, rhs))
                    throw Error(ErrorKind::invalid_ring_map,
                                "images break the relation e" + std::to_string(i) + "*e" +
                                    std::to_string(j));
            }
        break;
    }
    }
    return RingMap<F>{std::move(src), std::move(dst), std::move(images)};
}

template <Field F>
TElt<F> ring_map_apply(const RingMap<F>& rm, const TElt<F>& a)
{
    switch (rm.src.kind) {
    case TargetKind::field:
        return a.c.empty() ? t_zero(rm.dst) : t_from_scalar(rm.dst, a.c[0]);
    case TargetKind::univariate: {
        TElt<F> acc = t_zero(rm.dst);
        for (std::size_t i = a.c.size(); i-- > 0;)
            acc = t_add(rm.dst, t_mul(rm.dst, acc, rm.images[0]), t_from_scalar(rm.dst, a.c[i]));
        return acc;
    }
    case TargetKind::findim: {
        TElt<F> acc = t_zero(rm.dst);
        for (std::size_t i = 0; i < rm.src.dim; ++i)
            acc = t_add(rm.dst, acc, t_scale(rm.dst, a.c[i], rm.images[i]));
        return acc;
    }
    }
    return t_zero(rm.dst);
}

template <Field F>
TMatrix<F> ring_map_apply_matrix(const RingMap<F>& rm, const TMatrix<F>& m)
{
    TMatrix<F> out = tm_zero(rm.dst, m.rows, m.cols);
    for (std::size_t i = 0; i < m.e.size(); ++i)
        out.e[i] = ring_map_apply(rm, m.e[i]);
    return out;
}

template <Field F>
RingMap<F> ring_map_compose(const RingMap<F>& g, const RingMap<F>& f)
{
    std::vector<TElt<F>> images;
    images.reserve(f.images.size());
    for (const auto& img : f.images)
        images.push_back(ring_map_apply(g, img));
    return make_ring_map(f.src, g.dst, std::move(images));
}

/* Pullback of a presented module along a ring map: same generators, every
 * relation entry pushed through the map. */
template <Field F>
TModule<F> base_change(const RingMap<F>& rm, const TModule<F>& m)
{
    TModule<F> out;
    out.rank = m.rank;
    out.rels = ring_map_apply_matrix(rm, m.rels);
    return out;
}

/* Commutative algebra structure on a presented module.  All diagrams are
 * decidable here, so they are checked at construction: maps out of a
 * presented module agree exactly when their matrices differ by columns inside
 * the target relation span. */
template <Field F>
struct AlgebraObject {
    TModule<F> carrier;
    TMatrix<F> mult;  // carrier (x) carrier -> carrier
    TMatrix<F> unit;  // free rank one -> carrier
};

namespace detail {

template <Field F>
bool tm_eq_mod(const TargetRing<F>& r, const TMatrix<F>& a, const TMatrix<F>& b,
               const TMatrix<F>& rels)
{
    return t_span_contains(r, rels, tm_sub(r, a, b));
}

/* Permutation matrix flipping the tensor factors: e_{(i,j)} -> e_{(j,i)}. */
template <Field F>
TMatrix<F> tm_tensor_swap(const TargetRing<F>& r, std::uint32_t ra, std::uint32_t rb)
{
    TMatrix<F> s = tm_zero(r, ra * rb, ra * rb);
    for (std::uint32_t i = 0; i < ra; ++i)
        for (std::uint32_t j = 0; j < rb; ++j)
            s.at(j * ra + i, i * rb + j) = t_one(r);
    return s;
}

}  // namespace detail

template <Field F>
AlgebraObject<F> make_algebra(const TargetRing<F>& r, TModule<F> carrier, TMatrix<F> mult,
                              TMatrix<F> unit)
{
    const std::uint32_t n = carrier.rank;
    if (mult.rows != n || mult.cols != n * n || unit.rows != n || unit.cols != 1)
        throw Error(ErrorKind::invalid_algebra_map, "structure map shapes do not match the carrier");

    TModule<F> sq = t_tensor(r, carrier, carrier);
    if (!t_span_contains(r, carrier.rels, tm_mul(r, mult, sq.rels)))
        throw Error(ErrorKind::invalid_algebra_map,
                    "multiplication is not defined on the tensor square");

    TMatrix<F> idn = tm_identity(r, n);
    if (!detail::tm_eq_mod(r, tm_mul(r, mult, tm_kron(r, unit, idn)), idn, carrier.rels))
        throw Error(ErrorKind::invalid_algebra_map, "unit diagram does not commute");
    if (!detail::tm_eq_mod(r, tm_mul(r, mult, detail::tm_tensor_swap(r, n, n)), mult,
                           carrier.rels))
        throw Error(ErrorKind::invalid_algebra_map, "multiplication is not commutative");
    if (!detail::tm_eq_mod(r, tm_mul(r, mult, tm_kron(r, mult, idn)),
                           tm_mul(r, mult, tm_kron(r, idn, mult)), carrier.rels))
        throw Error(ErrorKind::invalid_algebra_map, "multiplication is not associative");

    return AlgebraObject<F>{std::move(carrier), std::move(mult), std::move(unit)};
}

/* Module over an algebra object: an action map satisfying the unit and
 * associativity diagrams. */
template <Field F>
struct AModule {
    TModule<F> underlying;
    TMatrix<F> action;  // algebra (x) underlying -> underlying
};

template <Field F>
AModule<F> make_amodule(const TargetRing<F>& r, const AlgebraObject<F>& alg,
                        TModule<F> underlying, TMatrix<F> action)
{
    const std::uint32_t na = alg.carrier.rank, nm = underlying.rank;
    if (action.rows != nm || action.cols != na * nm)
        throw Error(ErrorKind::invalid_module_structure, "action shape does not match");

    TModule<F> prod = t_tensor(r, alg.carrier, underlying);
    if (!t_span_contains(r, underlying.rels, tm_mul(r, action, prod.rels)))
        throw Error(ErrorKind::invalid_module_structure,
                    "action is not defined on the tensor product");

    TMatrix<F> idm = tm_identity(r, nm);
    if (!detail::tm_eq_mod(r, tm_mul(r, action, tm_kron(r, alg.unit, idm)), idm,
                           underlying.rels))
        throw Error(ErrorKind::invalid_module_structure, "unit does not act as the identity");
    if (!detail::tm_eq_mod(r, tm_mul(r, action, tm_kron(r, alg.mult, idm)),
                           tm_mul(r, action, tm_kron(r, tm_identity(r, na), action)),
                           underlying.rels))
        throw Error(ErrorKind::invalid_module_structure,
                    "action is incompatible with the multiplication");

    return AModule<F>{std::move(underlying), std::move(action)};
}

/* Descent along a ring map T' -> T'' with a section sigma of the pushed-down
 * algebra: base-change the underlying module, then coequalize the two
 * actions by adding one relation per (algebra generator, module generator)
 * pair, namely action''(e_g (x) e_x) - sigma(e_g) * e_x. */
template <Field F>
TModule<F> descend_module(const RingMap<F>& rm, const AlgebraObject<F>& alg,
                          const TMatrix<F>& sigma, const AModule<F>& m)
{
    const TargetRing<F>& dst = rm.dst;
    const std::uint32_t na = alg.carrier.rank, nm = m.underlying.rank;
    if (sigma.rows != 1 || sigma.cols != na)
        throw Error(ErrorKind::invalid_algebra_map, "sigma must be a row on the algebra generators");

    // sigma has to be a well-defined algebra map from the base-changed carrier
    TMatrix<F> carrier_rels = ring_map_apply_matrix(rm, alg.carrier.rels);
    TMatrix<F> dead = tm_mul(dst, sigma, carrier_rels);
    for (const auto& e : dead.e)
        if (!t_is_zero(dst, e))
            throw Error(ErrorKind::invalid_algebra_map,
                        "sigma does not vanish on the carrier relations");
    TMatrix<F> unit_img = tm_mul(dst, sigma, ring_map_apply_matrix(rm, alg.unit));
    if (!t_eq(dst, unit_img.at(0, 0), t_one(dst)))
        throw Error(ErrorKind::invalid_algebra_map, "sigma does not preserve the unit");
    TMatrix<F> mult_img = tm_mul(dst, sigma, ring_map_apply_matrix(rm, alg.mult));
    if (!tm_equal(dst, mult_img, tm_kron(dst, sigma, sigma)))
        throw Error(ErrorKind::invalid_algebra_map, "sigma does not preserve products");

    TModule<F> out = base_change(rm, m.underlying);
    TMatrix<F> action = ring_map_apply_matrix(rm, m.action);
    TMatrix<F> extra = tm_zero(dst, nm, na * nm);
    for (std::uint32_t g = 0; g < na; ++g)
        for (std::uint32_t x = 0; x < nm; ++x) {
            const std::uint32_t col = g * nm + x;
            for (std::uint32_t i = 0; i < nm; ++i)
                extra.at(i, col) = action.at(i, col);
            extra.at(x, col) = t_sub(dst, extra.at(x, col), sigma.at(0, g));
        }
    out.rels = tm_hstack(out.rels, extra);
    return out;
}

}  // namespace qpnkit
