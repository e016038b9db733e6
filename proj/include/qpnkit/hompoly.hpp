#pragma once

#include <map>
#include <string>
#include <vector>

#include "fields.hpp"
#include "monomial.hpp"

namespace qpnkit {

/* Homogeneous polynomial with a declared degree.  The zero polynomial of any
 * degree is the empty term map; nonzero terms all match the declared degree
 * and live over the declared variable count. */
template <Field F>
struct HomPoly {
    using Elt = typename F::Elt;

    std::size_t nvars = 0;
    int deg = 0;
    std::map<Monomial, Elt, MonoOrder> terms;

    bool is_zero() const { return terms.empty(); }
};

template <Field F>
HomPoly<F> hp_zero(std::size_t nvars, int deg)
{
    return HomPoly<F>{nvars, deg, {}};
}

template <Field F>
void hp_add_term(const F& f, HomPoly<F>& p, const Monomial& mono, const typename F::Elt& coeff)
{
    if (f.is_zero(coeff))
        return;
    if (mono.nvars() != p.nvars || mono.degree() != p.deg)
        throw Error(ErrorKind::usage_error, "term does not match declared degree");
    auto [it, inserted] = p.terms.emplace(mono, coeff);
    if (!inserted) {
        it->second = f.add(it->second, coeff);
        if (f.is_zero(it->second))
            p.terms.erase(it);
    }
}

template <Field F>
HomPoly<F> hp_const(const F& f, std::size_t nvars, const typename F::Elt& c)
{
    HomPoly<F> p = hp_zero<F>(nvars, 0);
    hp_add_term(f, p, mono_one(nvars), c);
    return p;
}

template <Field F>
HomPoly<F> hp_monomial(const F& f, const Monomial& mono, const typename F::Elt& coeff)
{
    HomPoly<F> p = hp_zero<F>(mono.nvars(), mono.degree());
    hp_add_term(f, p, mono, coeff);
    return p;
}

template <Field F>
HomPoly<F> hp_var(const F& f, std::size_t i, std::size_t nvars)
{
    return hp_monomial(f, mono_var(i, nvars), f.one());
}

template <Field F>
bool hp_eq(const F& f, const HomPoly<F>& a, const HomPoly<F>& b)
{
    if (a.nvars != b.nvars || a.terms.size() != b.terms.size())
        return false;
    auto it = a.terms.begin();
    auto jt = b.terms.begin();
    for (; it != a.terms.end(); ++it, ++jt)
        if (!(it->first == jt->first) || !f.eq(it->second, jt->second))
            return false;
    return true;
}

template <Field F>
HomPoly<F> hp_add(const F& f, const HomPoly<F>& a, const HomPoly<F>& b)
{
    if (a.nvars != b.nvars || (!a.is_zero() && !b.is_zero() && a.deg != b.deg))
        throw Error(ErrorKind::usage_error, "adding polynomials of different degrees");
    HomPoly<F> r = a;
    if (r.is_zero())
        r.deg = b.deg;
    for (const auto& [m, c] : b.terms)
        hp_add_term(f, r, m, c);
    return r;
}

template <Field F>
HomPoly<F> hp_neg(const F& f, const HomPoly<F>& a)
{
    HomPoly<F> r = a;
    for (auto& [m, c] : r.terms)
        c = f.neg(c);
    return r;
}

template <Field F>
HomPoly<F> hp_sub(const F& f, const HomPoly<F>& a, const HomPoly<F>& b)
{
    return hp_add(f, a, hp_neg(f, b));
}

template <Field F>
HomPoly<F> hp_scale(const F& f, const typename F::Elt& s, const HomPoly<F>& a)
{
    HomPoly<F> r = hp_zero<F>(a.nvars, a.deg);
    if (f.is_zero(s))
        return r;
    for (const auto& [m, c] : a.terms)
        r.terms.emplace(m, f.mul(s, c));
    return r;
}

template <Field F>
HomPoly<F> hp_mul(const F& f, const HomPoly<F>& a, const HomPoly<F>& b)
{
    if (a.nvars != b.nvars)
        throw Error(ErrorKind::usage_error, "multiplying polynomials over different rings");
    HomPoly<F> r = hp_zero<F>(a.nvars, a.deg + b.deg);
    for (const auto& [ma, ca] : a.terms)
        for (const auto& [mb, cb] : b.terms)
            hp_add_term(f, r, mono_mul(ma, mb), f.mul(ca, cb));
    return r;
}

/* Multiply by a single variable: cheap special case used by the recursion in
 * the truncation layer. */
template <Field F>
HomPoly<F> hp_mul_var(const F& f, const HomPoly<F>& a, std::size_t i)
{
    (void)f;
    HomPoly<F> r = hp_zero<F>(a.nvars, a.deg + 1);
    for (const auto& [m, c] : a.terms)
        r.terms.emplace(mono_mul_var(m, i), c);
    return r;
}

/* Substitute values for the variables in any commutative ring presented by
 * its operations; Ring must provide zero/one-like helpers via the callbacks.
 * Kept generic so both field elements and target ring elements fit. */
template <Field F, typename V, typename AddFn, typename MulFn, typename ScalarFn>
V hp_substitute(const F&, const HomPoly<F>& p, const std::vector<V>& values, const V& zero,
                AddFn&& vadd, MulFn&& vmul, ScalarFn&& from_scalar)
{
    V acc = zero;
    for (const auto& [m, c] : p.terms) {
        V term = from_scalar(c);
        for (std::size_t i = 0; i < m.e.size(); ++i)
            for (std::uint32_t k = 0; k < m.e[i]; ++k)
                term = vmul(term, values[i]);
        acc = vadd(acc, term);
    }
    return acc;
}

/* Substitution with field values, the common small case. */
template <Field F>
typename F::Elt hp_eval(const F& f, const HomPoly<F>& p, const std::vector<typename F::Elt>& values)
{
    return hp_substitute(f, p, values, f.zero(),
                         [&](const auto& a, const auto& b) { return f.add(a, b); },
                         [&](const auto& a, const auto& b) { return f.mul(a, b); },
                         [&](const auto& c) { return c; });
}

template <Field F>
std::string hp_to_string(const F& f, const HomPoly<F>& p)
{
    if (p.is_zero())
        return "0";
    std::string out;
    for (const auto& [m, c] : p.terms) {
        std::string coef = f.to_string(c);
        bool negative = !coef.empty() && coef[0] == '-';
        if (negative)
            coef = coef.substr(1);
        if (out.empty())
            out += negative ? "-" : "";
        else
            out += negative ? " - " : " + ";
        const bool constant = m.degree() == 0;
        if (coef != "1" || constant) {
            out += coef;
            if (!constant)
                out += "*";
        }
        if (!constant)
            out += render_monomial(m);
    }
    return out;
}

}  // namespace qpnkit
