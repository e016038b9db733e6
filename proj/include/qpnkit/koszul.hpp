#pragma once

#include <utility>
#include <vector>

#include "graded.hpp"

namespace qpnkit {

/* Presentation of the truncation of a twist S(d) at degree a:
 *    S(-a-1)^{H_{a+d-1} x pairs}  ->  S(-a)^{H_{a+d}}  ->  S(d)
 * with the relation column (q, i, j) carrying +x_i at row x_j*q and -x_j at
 * row x_i*q, and the inclusion sending the generator labeled p to p.
 * When a+d < 0 the truncation is all of S(d): no relations, identity
 * inclusion, empty labels. */
template <Field F>
struct TruncationPresentation {
    std::size_t nvars = 0;
    int a = 0;
    int d = 0;
    FPGradedModule<F> module;
    FPGradedModule<F> ambient;
    GradedModuleMap<F> inclusion;  // module -> ambient

    std::vector<Monomial> gen_labels;  // H_{a+d}
    struct RelLabel {
        Monomial q;
        int i = 0;
        int j = 0;
    };
    std::vector<RelLabel> rel_labels;

    bool whole_twist() const { return a + d < 0; }
};

template <Field F>
TruncationPresentation<F> truncation_presentation(const F& f, std::size_t n, int a, int d)
{
    const std::size_t nv = n + 1;
    TruncationPresentation<F> t;
    t.nvars = nv;
    t.a = a;
    t.d = d;
    t.ambient = free_module<F>(nv, GradedFree{{d}});

    if (a + d < 0) {
        t.module = t.ambient;
        GradedMatrix<F> ident = gm_zero<F>(nv, t.module.gens, t.ambient.gens);
        ident.at(0, 0) = hp_const(f, nv, f.one());
        t.inclusion = make_map(f, t.module, t.ambient, std::move(ident));
        return t;
    }

    t.gen_labels = enumerate_monomials(nv, a + d);
    const std::size_t h = t.gen_labels.size();
    GradedFree gens;
    gens.twists.assign(h, -a);

    const auto qs = enumerate_monomials(nv, a + d - 1);
    for (const auto& q : qs)
        for (int i = 0; i < static_cast<int>(nv); ++i)
            for (int j = i + 1; j < static_cast<int>(nv); ++j)
                t.rel_labels.push_back({q, i, j});

    GradedFree rsrc;
    rsrc.twists.assign(t.rel_labels.size(), -a - 1);
    GradedMatrix<F> rels = gm_zero<F>(nv, rsrc, gens);
    for (std::size_t col = 0; col < t.rel_labels.size(); ++col) {
        const auto& [q, i, j] = t.rel_labels[col];
        const std::size_t row_xj_q = monomial_index(mono_mul_var(q, j));
        const std::size_t row_xi_q = monomial_index(mono_mul_var(q, i));
        rels.at(row_xj_q, col) = hp_var(f, i, nv);
        rels.at(row_xi_q, col) = hp_neg(f, hp_var(f, j, nv));
    }

    t.module.nvars = nv;
    t.module.gens = gens;
    t.module.rels = std::move(rels);

    GradedMatrix<F> incl = gm_zero<F>(nv, gens, t.ambient.gens);
    for (std::size_t p = 0; p < h; ++p)
        incl.at(0, p) = hp_monomial(f, t.gen_labels[p], f.one());
    t.inclusion = make_map(f, t.module, t.ambient, std::move(incl));
    return t;
}

/* One candidate value per monomial of H_{a+d}, each given as degree-a
 * coordinates on the generators of the intended target module. */
template <Field F>
struct SectionTuple {
    int a = 0;
    int d = 0;
    std::vector<std::vector<typename F::Elt>> values;  // H_{a+d} order
};

namespace detail {

template <Field F>
bool in_relation_span(const F& f, const FPGradedModule<F>& target, int k,
                      const std::vector<typename F::Elt>& v)
{
    bool nonzero = false;
    for (const auto& c : v)
        if (!f.is_zero(c)) {
            nonzero = true;
            break;
        }
    if (!nonzero)
        return true;
    if (target.rels.source.rank() == 0)
        return false;
    SparseMat<F> rels_k = realize(f, target.rels, k);
    SparseMat<F> joined(rels_k.rows, rels_k.cols + 1);
    joined.col = rels_k.col;
    joined.col.emplace_back();
    for (std::size_t i = 0; i < v.size(); ++i)
        if (!f.is_zero(v[i]))
            joined.col.back().emplace_back(static_cast<std::uint32_t>(i), v[i]);
    return sp_rank(f, joined) == sp_rank(f, rels_k);
}

/* The compatibility condition that makes a tuple extendable: for every
 * relation triple, x_i applied to the value at x_j*q agrees with x_j applied
 * to the value at x_i*q, as elements of the target (so modulo its relations). */
template <Field F>
void check_tuple_compatible(const F& f, const TruncationPresentation<F>& t,
                            const FPGradedModule<F>& target, const SectionTuple<F>& tuple)
{
    if (tuple.a != t.a || tuple.d != t.d)
        throw Error(ErrorKind::usage_error, "tuple indexed for different truncation parameters");
    if (tuple.values.size() != t.gen_labels.size())
        throw Error(ErrorKind::usage_error, "tuple must provide one value per generator label");
    const std::size_t dim_a = free_component_dim(target.nvars, target.gens, t.a);
    for (const auto& v : tuple.values)
        if (v.size() != dim_a)
            throw Error(ErrorKind::usage_error, "tuple value outside the degree-a component");

    for (const auto& rel : t.rel_labels) {
        const std::size_t idx_xj = monomial_index(mono_mul_var(rel.q, rel.j));
        const std::size_t idx_xi = monomial_index(mono_mul_var(rel.q, rel.i));
        const auto lhs = apply_mult_var(f, target.nvars, target.gens, rel.i, t.a,
                                        tuple.values[idx_xj]);
        const auto rhs = apply_mult_var(f, target.nvars, target.gens, rel.j, t.a,
                                        tuple.values[idx_xi]);
        std::vector<typename F::Elt> diff(lhs.size(), f.zero());
        for (std::size_t u = 0; u < lhs.size(); ++u)
            diff[u] = f.sub(lhs[u], rhs[u]);
        if (!in_relation_span(f, target, t.a + 1, diff))
            throw IncompatibleTupleError(rel.q.e, rel.i, rel.j,
                                         "values at x" + std::to_string(rel.j) + "*q and x" +
                                             std::to_string(rel.i) + "*q, q = " +
                                             render_monomial(rel.q) + ", do not agree");
    }
}

}  // namespace detail

/* Extend a compatible tuple to the unique graded map out of the truncation. */
template <Field F>
GradedModuleMap<F> phi_extend(const F& f, const TruncationPresentation<F>& t,
                              const FPGradedModule<F>& target, const SectionTuple<F>& tuple)
{
    if (t.whole_twist())
        throw Error(ErrorKind::usage_error, "extension needs a nontrivial truncation (a+d >= 0)");
    detail::check_tuple_compatible(f, t, target, tuple);

    GradedMatrix<F> matrix = gm_zero<F>(t.nvars, t.module.gens, target.gens);
    const auto off = free_component_offsets(target.nvars, target.gens, t.a);
    for (std::size_t p = 0; p < tuple.values.size(); ++p) {
        const auto& v = tuple.values[p];
        for (std::size_t s = 0; s < target.gens.rank(); ++s) {
            const auto mons = enumerate_monomials(target.nvars, t.a + target.gens.twists[s]);
            for (std::size_t u = 0; u < mons.size(); ++u)
                if (!f.is_zero(v[off[s] + u]))
                    hp_add_term(f, matrix.at(s, p), mons[u], v[off[s] + u]);
        }
    }
    return make_map(f, t.module, target, std::move(matrix));
}

/* Evaluate the extension on one monomial by peeling the smallest-index
 * variable down to the base tuple, without building the matrix. */
template <Field F>
std::vector<typename F::Elt> evaluate_phi_recursive(const F& f, const TruncationPresentation<F>& t,
                                                    const SectionTuple<F>& tuple,
                                                    const FPGradedModule<F>& target,
                                                    const Monomial& mono)
{
    if (t.whole_twist())
        throw Error(ErrorKind::usage_error, "evaluation needs a nontrivial truncation (a+d >= 0)");
    detail::check_tuple_compatible(f, t, target, tuple);

    const int k = mono.degree() - t.d;
    if (mono.nvars() != t.nvars || k < t.a)
        throw Error(ErrorKind::usage_error, "monomial outside the truncated degrees");

    auto rec = [&](auto&& self, const Monomial& m, int deg) -> std::vector<typename F::Elt> {
        if (deg == t.a)
            return tuple.values[monomial_index(m)];
        std::size_t s = 0;
        while (m.e[s] == 0)
            ++s;
        const auto below = self(self, mono_div_var(m, s), deg - 1);
        return apply_mult_var(f, target.nvars, target.gens, s, deg - 1, below);
    };
    return rec(rec, mono, k);
}

/* Free symmetric power: basis = degree-m multisets of the generators, stored
 * as exponent vectors over the generator slots. */
struct SymFree {
    GradedFree free;
    std::vector<Monomial> labels;  // exponent vector per basis element
};

inline SymFree sym_free(const GradedFree& f, int m)
{
    SymFree out;
    if (m == 0) {
        out.free.twists.push_back(0);
        out.labels.push_back(mono_one(f.rank()));
        return out;
    }
    if (f.rank() == 0)
        return out;  // no degree-m multisets
    out.labels = enumerate_monomials(f.rank(), m);
    out.free.twists.reserve(out.labels.size());
    for (const auto& mu : out.labels) {
        int tw = 0;
        for (std::size_t s = 0; s < f.rank(); ++s)
            tw += static_cast<int>(mu.e[s]) * f.twists[s];
        out.free.twists.push_back(tw);
    }
    return out;
}

/* Symmetric power of a presented module via the right-exact recipe: relations
 * are one relation column tensored with a degree-(k-1) multiset of
 * generators, pushed into the degree-k multiset basis. */
template <Field F>
FPGradedModule<F> sym_module(const F& f, const FPGradedModule<F>& m, int k)
{
    if (k < 0)
        throw Error(ErrorKind::usage_error, "negative symmetric power");
    const SymFree target = sym_free(m.gens, k);
    if (k == 0 || m.rels.source.rank() == 0)
        return free_module<F>(m.nvars, target.free);

    const SymFree lower = sym_free(m.gens, k - 1);
    const std::size_t c = m.rels.source.rank();

    GradedFree rsrc;
    rsrc.twists.reserve(c * lower.labels.size());
    for (std::size_t rc = 0; rc < c; ++rc)
        for (const auto& mu : lower.free.twists)
            rsrc.twists.push_back(m.rels.source.twists[rc] + mu);

    GradedMatrix<F> rels = gm_zero<F>(m.nvars, rsrc, target.free);
    for (std::size_t rc = 0; rc < c; ++rc)
        for (std::size_t mu = 0; mu < lower.labels.size(); ++mu) {
            const std::size_t col = rc * lower.labels.size() + mu;
            for (std::size_t s = 0; s < m.gens.rank(); ++s) {
                if (m.rels.at(s, rc).is_zero())
                    continue;
                const Monomial nu = mono_mul_var(lower.labels[mu], s);
                rels.at(monomial_index(nu), col) = m.rels.at(s, rc);
            }
        }

    FPGradedModule<F> out;
    out.nvars = m.nvars;
    out.gens = rels.target;
    out.rels = std::move(rels);
    return out;
}

}  // namespace qpnkit
