#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "errors.hpp"
#include "util.hpp"

namespace qpnkit {

/* Exponent vector over variables x0..xn.  The number of variables is carried
 * by the vector length (n+1 entries). */
struct Monomial {
    std::vector<std::uint32_t> e;

    std::size_t nvars() const { return e.size(); }

    int degree() const
    {
        int d = 0;
        for (auto v : e)
            d += static_cast<int>(v);
        return d;
    }

    bool operator==(const Monomial&) const = default;
};

/* Enumeration order: lexicographic by exponent vector, largest first, so x0
 * powers come first.  For one variable pair and degree 2 this reads
 * (2,0), (1,1), (0,2). */
inline bool mono_before(const Monomial& a, const Monomial& b)
{
    return a.e > b.e;
}

struct MonoOrder {
    bool operator()(const Monomial& a, const Monomial& b) const { return mono_before(a, b); }
};

/* Number of degree-m monomials in nvars variables. */
inline std::size_t monomial_count(std::size_t nvars, int m)
{
    if (m < 0)
        return 0;
    return static_cast<std::size_t>(binomial(static_cast<std::int64_t>(nvars) - 1 + m, m));
}

/* All monomials of total degree m, in enumeration order.  Empty for m < 0. */
inline std::vector<Monomial> enumerate_monomials(std::size_t nvars, int m)
{
    std::vector<Monomial> out;
    if (m < 0 || nvars == 0)
        return out;
    out.reserve(monomial_count(nvars, m));
    Monomial cur;
    cur.e.assign(nvars, 0);
    // depth-first, assigning the highest feasible exponent first
    auto rec = [&](auto&& self, std::size_t pos, int remaining) -> void {
        if (pos + 1 == nvars) {
            cur.e[pos] = static_cast<std::uint32_t>(remaining);
            out.push_back(cur);
            return;
        }
        for (int v = remaining; v >= 0; --v) {
            cur.e[pos] = static_cast<std::uint32_t>(v);
            self(self, pos + 1, remaining - v);
        }
        cur.e[pos] = 0;
    };
    rec(rec, 0, m);
    return out;
}

/* Position of a monomial in the enumeration of its degree, by counting the
 * monomials that precede it. */
inline std::size_t monomial_index(const Monomial& mono)
{
    const std::size_t nv = mono.nvars();
    std::size_t idx = 0;
    int remaining = mono.degree();
    for (std::size_t pos = 0; pos + 1 < nv; ++pos) {
        // monomials with a larger exponent at pos come first
        for (int v = remaining; v > static_cast<int>(mono.e[pos]); --v)
            idx += monomial_count(nv - pos - 1, remaining - v);
        remaining -= static_cast<int>(mono.e[pos]);
    }
    return idx;
}

inline Monomial mono_mul(const Monomial& a, const Monomial& b)
{
    Monomial r = a;
    for (std::size_t i = 0; i < r.e.size(); ++i)
        r.e[i] += b.e[i];
    return r;
}

/* a / x_i; requires a positive exponent. */
inline Monomial mono_div_var(const Monomial& a, std::size_t i)
{
    Monomial r = a;
    if (r.e[i] == 0)
        throw Error(ErrorKind::usage_error, "monomial not divisible by requested variable");
    --r.e[i];
    return r;
}

inline Monomial mono_mul_var(const Monomial& a, std::size_t i)
{
    Monomial r = a;
    ++r.e[i];
    return r;
}

inline Monomial mono_one(std::size_t nvars)
{
    Monomial r;
    r.e.assign(nvars, 0);
    return r;
}

inline Monomial mono_var(std::size_t i, std::size_t nvars)
{
    Monomial r = mono_one(nvars);
    r.e[i] = 1;
    return r;
}

inline std::string render_monomial(const Monomial& m)
{
    std::string out;
    for (std::size_t i = 0; i < m.e.size(); ++i) {
        if (m.e[i] == 0)
            continue;
        if (!out.empty())
            out += "*";
        out += "x" + std::to_string(i);
        if (m.e[i] > 1)
            out += "^" + std::to_string(m.e[i]);
    }
    return out.empty() ? "1" : out;
}

}  // namespace qpnkit
