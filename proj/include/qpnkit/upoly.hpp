#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "fields.hpp"

namespace qpnkit {

/* Univariate polynomial, coefficients ascending, no trailing zeros.
 * degree(zero) == -1 by convention. */
template <Field F>
struct UPoly {
    using Elt = typename F::Elt;

    std::vector<Elt> c;

    std::ptrdiff_t degree() const { return static_cast<std::ptrdiff_t>(c.size()) - 1; }
    bool is_zero() const { return c.empty(); }
};

template <Field F>
void up_trim(const F& f, UPoly<F>& p)
{
    while (!p.c.empty() && f.is_zero(p.c.back()))
        p.c.pop_back();
}

template <Field F>
UPoly<F> up_zero(const F&)
{
    return {};
}

template <Field F>
UPoly<F> up_const(const F& f, typename F::Elt v)
{
    UPoly<F> p;
    if (!f.is_zero(v))
        p.c.push_back(std::move(v));
    return p;
}

template <Field F>
UPoly<F> up_one(const F& f)
{
    return up_const(f, f.one());
}

/* t^k */
template <Field F>
UPoly<F> up_monomial(const F& f, std::size_t k, typename F::Elt v)
{
    UPoly<F> p;
    if (!f.is_zero(v)) {
        p.c.assign(k + 1, f.zero());
        p.c[k] = std::move(v);
    }
    return p;
}

template <Field F>
bool up_eq(const F& f, const UPoly<F>& a, const UPoly<F>& b)
{
    if (a.c.size() != b.c.size())
        return false;
    for (std::size_t i = 0; i < a.c.size(); ++i)
        if (!f.eq(a.c[i], b.c[i]))
            return false;
    return true;
}

template <Field F>
UPoly<F> up_add(const F& f, const UPoly<F>& a, const UPoly<F>& b)
{
    UPoly<F> r;
    r.c.resize(std::max(a.c.size(), b.c.size()), f.zero());
    for (std::size_t i = 0; i < a.c.size(); ++i)
        r.c[i] = a.c[i];
    for (std::size_t i = 0; i < b.c.size(); ++i)
        r.c[i] = f.add(r.c[i], b.c[i]);
    up_trim(f, r);
    return r;
}

template <Field F>
UPoly<F> up_neg(const F& f, const UPoly<F>& a)
{
    UPoly<F> r = a;
    for (auto& v : r.c)
        v = f.neg(v);
    return r;
}

template <Field F>
UPoly<F> up_sub(const F& f, const UPoly<F>& a, const UPoly<F>& b)
{
    return up_add(f, a, up_neg(f, b));
}

template <Field F>
UPoly<F> up_mul(const F& f, const UPoly<F>& a, const UPoly<F>& b)
{
    if (a.is_zero() || b.is_zero())
        return {};
    UPoly<F> r;
    r.c.assign(a.c.size() + b.c.size() - 1, f.zero());
    for (std::size_t i = 0; i < a.c.size(); ++i) {
        if (f.is_zero(a.c[i]))
            continue;
        for (std::size_t j = 0; j < b.c.size(); ++j)
            r.c[i + j] = f.add(r.c[i + j], f.mul(a.c[i], b.c[j]));
    }
    up_trim(f, r);
    return r;
}

template <Field F>
UPoly<F> up_scale(const F& f, const typename F::Elt& s, const UPoly<F>& a)
{
    if (f.is_zero(s))
        return {};
    UPoly<F> r = a;
    for (auto& v : r.c)
        v = f.mul(s, v);
    return r;
}

/* Euclidean division: a = q*b + r with deg r < deg b. */
template <Field F>
std::pair<UPoly<F>, UPoly<F>> up_divmod(const F& f, UPoly<F> a, const UPoly<F>& b)
{
    if (b.is_zero())
        throw Error(ErrorKind::usage_error, "polynomial division by zero");
    UPoly<F> q;
    if (a.degree() >= b.degree()) {
        q.c.assign(a.c.size() - b.c.size() + 1, f.zero());
        const auto lead_inv = f.inv(b.c.back());
        for (std::ptrdiff_t k = a.degree() - b.degree(); k >= 0; --k) {
            if (f.is_zero(a.c[k + b.degree()]))
                continue;
            const auto coef = f.mul(a.c[k + b.degree()], lead_inv);
            q.c[k] = coef;
            for (std::size_t i = 0; i < b.c.size(); ++i)
                a.c[k + i] = f.sub(a.c[k + i], f.mul(coef, b.c[i]));
        }
        up_trim(f, q);
        up_trim(f, a);
    }
    return {std::move(q), std::move(a)};
}

template <Field F>
UPoly<F> up_make_monic(const F& f, const UPoly<F>& a)
{
    if (a.is_zero())
        return a;
    return up_scale(f, f.inv(a.c.back()), a);
}

template <Field F>
bool up_is_unit(const UPoly<F>& a)
{
    return a.degree() == 0;
}

template <Field F>
UPoly<F> up_gcd_monic(const F& f, UPoly<F> a, UPoly<F> b)
{
    while (!b.is_zero()) {
        auto [q, r] = up_divmod(f, std::move(a), b);
        (void)q;
        a = std::move(b);
        b = std::move(r);
    }
    return up_make_monic(f, a);
}

/* Extended Euclid: returns (g, u, v) with u*a + v*b = g and g monic (zero when
 * both inputs are zero). */
template <Field F>
struct ExtGcd {
    UPoly<F> g, u, v;
};

template <Field F>
ExtGcd<F> up_gcd_ext(const F& f, const UPoly<F>& a, const UPoly<F>& b)
{
    UPoly<F> r0 = a, r1 = b;
    UPoly<F> u0 = up_one(f), u1 = up_zero(f);
    UPoly<F> v0 = up_zero(f), v1 = up_one(f);
    while (!r1.is_zero()) {
        auto [q, r] = up_divmod(f, r0, r1);
        r0 = std::move(r1);
        r1 = std::move(r);
        UPoly<F> u2 = up_sub(f, u0, up_mul(f, q, u1));
        u0 = std::move(u1);
        u1 = std::move(u2);
        UPoly<F> v2 = up_sub(f, v0, up_mul(f, q, v1));
        v0 = std::move(v1);
        v1 = std::move(v2);
    }
    if (!r0.is_zero()) {
        // scale so the gcd comes out monic
        auto lead = r0.c.back();
        auto s = f.inv(lead);
        r0 = up_scale(f, s, r0);
        u0 = up_scale(f, s, u0);
        v0 = up_scale(f, s, v0);
    }
    return {std::move(r0), std::move(u0), std::move(v0)};
}

/* Whether b divides a exactly. */
template <Field F>
bool up_divides(const F& f, const UPoly<F>& b, const UPoly<F>& a)
{
    if (a.is_zero())
        return true;
    if (b.is_zero())
        return false;
    return up_divmod(f, a, b).second.is_zero();
}

template <Field F>
typename F::Elt up_eval(const F& f, const UPoly<F>& p, const typename F::Elt& x)
{
    auto acc = f.zero();
    for (std::size_t i = p.c.size(); i-- > 0;)
        acc = f.add(f.mul(acc, x), p.c[i]);
    return acc;
}

template <Field F>
std::string up_to_string(const F& f, const UPoly<F>& p, const std::string& var = "t")
{
    if (p.is_zero())
        return "0";
    std::string out;
    for (std::size_t i = p.c.size(); i-- > 0;) {
        if (f.is_zero(p.c[i]))
            continue;
        std::string coef = f.to_string(p.c[i]);
        bool negative = !coef.empty() && coef[0] == '-';
        if (out.empty()) {
            if (negative) {
                out += "-";
                coef = coef.substr(1);
            }
        } else {
            out += negative ? " - " : " + ";
            if (negative)
                coef = coef.substr(1);
        }
        if (i == 0) {
            out += coef;
        } else {
            if (coef != "1")
                out += coef + "*";
            out += var;
            if (i > 1)
                out += "^" + std::to_string(i);
        }
    }
    return out;
}

}  // namespace qpnkit
