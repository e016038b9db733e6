#include <catch2/catch_amalgamated.hpp>

#include "qpnkit/fields.hpp"

using namespace qpnkit;

TEST_CASE("field spec validates the modulus")
{
    CHECK(FieldSpec::rationals().characteristic == 0);
    CHECK(FieldSpec::prime_field(7).characteristic == 7);
    CHECK(FieldSpec::prime_field(2147483629).characteristic == 2147483629u);  // largest 31-bit prime
    CHECK_THROWS_AS(FieldSpec::prime_field(1), Error);
    CHECK_THROWS_AS(FieldSpec::prime_field(4), Error);
    CHECK_THROWS_AS(FieldSpec::prime_field(91), Error);          // 7 * 13
    CHECK_THROWS_AS(FieldSpec::prime_field(2147483647u + 2u), Error);  // over 31 bits
}

TEST_CASE("rational arithmetic is exact")
{
    Rationals q;
    auto third = q.div(q.one(), q.from_int(3));
    auto sum = q.zero();
    for (int i = 0; i < 3; ++i)
        sum = q.add(sum, third);
    CHECK(q.eq(sum, q.one()));

    // coefficient growth must not lose precision
    auto big = q.from_int(1);
    for (int i = 2; i <= 20; ++i)
        big = q.mul(big, q.from_int(i));
    auto back = big;
    for (int i = 2; i <= 20; ++i)
        back = q.div(back, q.from_int(i));
    CHECK(q.eq(back, q.one()));
    CHECK(q.to_string(q.div(q.from_int(-3), q.from_int(4))) == "-3/4");
}

TEST_CASE("prime field inverses")
{
    PrimeField f7(7);
    for (std::uint32_t a = 1; a < 7; ++a)
        CHECK(f7.eq(f7.mul(a, f7.inv(a)), f7.one()));
    CHECK_THROWS_AS(f7.inv(0), Error);

    PrimeField big(2147483629);
    auto a = big.from_int(1234567890);
    CHECK(big.eq(big.mul(a, big.inv(a)), big.one()));
    CHECK(big.eq(big.from_int(-1), big.neg(big.one())));
}

TEST_CASE("scalar parsing")
{
    Rationals q;
    CHECK(q.eq(*parse_scalar(q, "3/4"), q.div(q.from_int(3), q.from_int(4))));
    CHECK(q.eq(*parse_scalar(q, "-2"), q.from_int(-2)));
    CHECK(q.eq(*parse_scalar(q, "+5"), q.from_int(5)));
    CHECK(!parse_scalar(q, "x").has_value());
    CHECK(!parse_scalar(q, "1/0").has_value());
    CHECK(!parse_scalar(q, "").has_value());

    PrimeField f7(7);
    CHECK(f7.eq(*parse_scalar(f7, "10"), 3));
    CHECK(f7.eq(*parse_scalar(f7, "-1"), 6));
    CHECK(f7.eq(*parse_scalar(f7, "3/4"), f7.div(3, 4)));
}

TEST_CASE("dispatch on a field spec")
{
    auto chr = with_field(FieldSpec::prime_field(7), [](auto f) { return f.spec().characteristic; });
    CHECK(chr == 7);
    auto zero = with_field(FieldSpec::rationals(), [](auto f) { return f.spec().characteristic; });
    CHECK(zero == 0);
}
