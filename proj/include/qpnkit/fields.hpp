#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <concepts>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include "errors.hpp"

namespace qpnkit {

/* Runtime description of a coefficient field, used by the CLI and by
 * serialization.  characteristic == 0 means the rationals. */
struct FieldSpec {
    std::uint32_t characteristic = 0;

    static FieldSpec rationals() { return FieldSpec{0}; }

    static FieldSpec prime_field(std::uint32_t p)
    {
        if (!is_prime(p))
            throw Error(ErrorKind::usage_error, "GF(" + std::to_string(p) + "): modulus is not prime");
        if (p >= (1u << 31))
            throw Error(ErrorKind::usage_error, "GF(" + std::to_string(p) + "): modulus must fit in 31 bits");
        return FieldSpec{p};
    }

    static bool is_prime(std::uint64_t p)
    {
        if (p < 2)
            return false;
        for (std::uint64_t d = 2; d * d <= p; ++d)
            if (p % d == 0)
                return false;
        return true;
    }

    bool operator==(const FieldSpec&) const = default;

    std::string name() const
    {
        return characteristic == 0 ? std::string("Q") : "GF(" + std::to_string(characteristic) + ")";
    }
};

/* Field-object pattern: the field is a small value passed alongside element
 * data, so one templated algorithm serves every coefficient type. */
template <typename F>
concept Field = requires(const F f, const typename F::Elt a, const typename F::Elt b) {
    typename F::Elt;
    { f.zero() } -> std::convertible_to<typename F::Elt>;
    { f.one() } -> std::convertible_to<typename F::Elt>;
    { f.add(a, b) } -> std::convertible_to<typename F::Elt>;
    { f.sub(a, b) } -> std::convertible_to<typename F::Elt>;
    { f.mul(a, b) } -> std::convertible_to<typename F::Elt>;
    { f.div(a, b) } -> std::convertible_to<typename F::Elt>;
    { f.neg(a) } -> std::convertible_to<typename F::Elt>;
    { f.inv(a) } -> std::convertible_to<typename F::Elt>;
    { f.is_zero(a) } -> std::convertible_to<bool>;
    { f.eq(a, b) } -> std::convertible_to<bool>;
    { f.from_int(std::int64_t{}) } -> std::convertible_to<typename F::Elt>;
    { f.to_string(a) } -> std::convertible_to<std::string>;
    { f.spec() } -> std::convertible_to<FieldSpec>;
};

class Rationals {
public:
    using Elt = boost::multiprecision::cpp_rational;

    Elt zero() const { return Elt(0); }
    Elt one() const { return Elt(1); }
    Elt add(const Elt& a, const Elt& b) const { return a + b; }
    Elt sub(const Elt& a, const Elt& b) const { return a - b; }
    Elt mul(const Elt& a, const Elt& b) const { return a * b; }
    Elt neg(const Elt& a) const { return -a; }

    Elt div(const Elt& a, const Elt& b) const
    {
        if (b == 0)
            throw Error(ErrorKind::usage_error, "division by zero");
        return a / b;
    }

    Elt inv(const Elt& a) const { return div(one(), a); }
    bool is_zero(const Elt& a) const { return a == 0; }
    bool eq(const Elt& a, const Elt& b) const { return a == b; }
    Elt from_int(std::int64_t v) const { return Elt(v); }
    std::string to_string(const Elt& a) const { return a.str(); }
    FieldSpec spec() const { return FieldSpec::rationals(); }
};

class PrimeField {
public:
    using Elt = std::uint32_t;

    explicit PrimeField(std::uint32_t p) : p_(p)
    {
        (void)FieldSpec::prime_field(p);  // reuse the validation
    }

    std::uint32_t modulus() const { return p_; }

    Elt zero() const { return 0; }
    Elt one() const { return p_ == 1 ? 0 : 1; }
    Elt add(Elt a, Elt b) const { return reduce(static_cast<std::uint64_t>(a) + b); }
    Elt sub(Elt a, Elt b) const { return reduce(static_cast<std::uint64_t>(a) + p_ - b); }
    Elt mul(Elt a, Elt b) const { return reduce(static_cast<std::uint64_t>(a) * b); }
    Elt neg(Elt a) const { return a == 0 ? 0 : p_ - a; }

    Elt inv(Elt a) const
    {
        if (a == 0)
            throw Error(ErrorKind::usage_error, "division by zero");
        // extended Euclid on (a, p)
        std::int64_t t = 0, new_t = 1;
        std::int64_t r = p_, new_r = a;
        while (new_r != 0) {
            std::int64_t q = r / new_r;
            t = std::exchange(new_t, t - q * new_t);
            r = std::exchange(new_r, r - q * new_r);
        }
        if (t < 0)
            t += p_;
        return static_cast<Elt>(t);
    }

    Elt div(Elt a, Elt b) const { return mul(a, inv(b)); }
    bool is_zero(Elt a) const { return a == 0; }
    bool eq(Elt a, Elt b) const { return a == b; }

    Elt from_int(std::int64_t v) const
    {
        std::int64_t m = v % static_cast<std::int64_t>(p_);
        if (m < 0)
            m += p_;
        return static_cast<Elt>(m);
    }

    std::string to_string(Elt a) const { return std::to_string(a); }
    FieldSpec spec() const { return FieldSpec{p_}; }

private:
    Elt reduce(std::uint64_t v) const { return static_cast<Elt>(v % p_); }

    std::uint32_t p_;
};

static_assert(Field<Rationals>);
static_assert(Field<PrimeField>);

/* Parse a scalar literal: integers over any field, "a/b" fractions over Q. */
template <Field F>
std::optional<typename F::Elt> parse_scalar(const F& f, const std::string& text)
{
    auto parse_int = [](const std::string& s, std::int64_t& out) {
        if (s.empty())
            return false;
        std::size_t k = 0;
        bool negative = false;
        if (s[0] == '+' || s[0] == '-') {
            negative = s[0] == '-';
            k = 1;
        }
        if (k == s.size())
            return false;
        std::int64_t v = 0;
        for (; k < s.size(); ++k) {
            if (s[k] < '0' || s[k] > '9')
                return false;
            if (v > (INT64_MAX - (s[k] - '0')) / 10)
                return false;
            v = v * 10 + (s[k] - '0');
        }
        out = negative ? -v : v;
        return true;
    };

    auto slash = text.find('/');
    std::int64_t num = 0;
    if (slash == std::string::npos) {
        if (!parse_int(text, num))
            return std::nullopt;
        return f.from_int(num);
    }
    std::int64_t den = 0;
    if (!parse_int(text.substr(0, slash), num) || !parse_int(text.substr(slash + 1), den) || den == 0)
        return std::nullopt;
    return f.div(f.from_int(num), f.from_int(den));
}

/* Dispatch a callable over the concrete field selected by a FieldSpec. */
template <typename Fn>
decltype(auto) with_field(const FieldSpec& spec, Fn&& fn)
{
    if (spec.characteristic == 0)
        return fn(Rationals{});
    return fn(PrimeField{spec.characteristic});
}

}  // namespace qpnkit
