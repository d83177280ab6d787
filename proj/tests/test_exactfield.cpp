#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "ratfun.hpp"

using namespace dynrefl;

static RegistryPtr reg2() {
    static RegistryPtr r = VariableRegistry::make(2);
    return r;
}

TEST_CASE("polynomial arithmetic and shift substitution") {
    auto reg = reg2();
    auto q1 = Polynomial::variable(reg, 0);
    auto q2 = Polynomial::variable(reg, 1);
    auto mu = Polynomial::variable(reg, reg->muIndex());

    CHECK((q1 + q2) * (q1 - q2) == q1 * q1 - q2 * q2);
    CHECK((q1 - q2).shiftQ({1, 0}) == q1 - q2 + mu);
    CHECK((q1 * q2).shiftQ({2, -1}) == (q1 + mu * mpq_class(2)) * (q2 - mu));
    CHECK((q1.pow(3)).derivative(0) == q1 * q1 * mpq_class(3));
    CHECK(q1.substitute(0, q2 + mu) == q2 + mu);

    auto p = (q1 - q2) * (q1 + q2 + mu);
    auto quot = p.divideExact(q1 - q2);
    REQUIRE(quot.has_value());
    CHECK(*quot == q1 + q2 + mu);
    CHECK(!p.divideExact(q1 + Polynomial::constant(reg, 1)).has_value());

    CHECK(parsePolynomial(reg, p.toString()) == p);
}

TEST_CASE("rational functions cancel, parse, evaluate") {
    auto reg = reg2();
    auto q1 = Polynomial::variable(reg, 0);
    auto q2 = Polynomial::variable(reg, 1);
    auto mu = Polynomial::variable(reg, reg->muIndex());

    auto f = RationalFunction::fraction(mu, q1 - q2);
    auto g = RationalFunction::fraction(mu, q2 - q1);
    CHECK((f + g).isZero());
    CHECK(RationalFunction::fraction(q1 - q2, q1 - q2) == RationalFunction::one(reg));

    auto prod = f * RationalFunction::fraction(mu, q1 - q2 + mu);
    CHECK(parseRationalFunction(reg, prod.toString()) == prod);
    CHECK(f.eval({3, 1, 1}) == mpq_class(1, 2));

    // q -> q + v mu substitution on both layers agrees
    auto sh = RationalFunction::fraction(q1 - q2 + mu, q1 - q2).shiftQ({1, 0});
    CHECK(rfEqualExact(sh, RationalFunction::fraction(q1 - q2 + mu * mpq_class(2),
                                                      q1 - q2 + mu)));

    // reciprocal and division
    CHECK(rfEqualExact(f * f.reciprocal(), RationalFunction::one(reg)));
    CHECK(rfEqualExact(prod / f, RationalFunction::fraction(mu, q1 - q2 + mu)));
}

TEST_CASE("series expansion in mu") {
    auto reg = reg2();
    auto q1 = Polynomial::variable(reg, 0);
    auto q2 = Polynomial::variable(reg, 1);
    auto mu = Polynomial::variable(reg, reg->muIndex());
    // mu/(q1-q2+mu) = mu/(q1-q2) - mu^2/(q1-q2)^2 + O(mu^3)
    auto s = seriesExpand(RationalFunction::fraction(mu, q1 - q2 + mu), reg->muIndex(), 2);
    REQUIRE(s.size() == 3);
    CHECK(s[0].isZero());
    CHECK(rfEqualExact(s[1], RationalFunction::fraction(Polynomial::constant(reg, 1), q1 - q2)));
    CHECK(rfEqualExact(s[2], -RationalFunction::fraction(Polynomial::constant(reg, 1),
                                                         (q1 - q2) * (q1 - q2))));
}

TEST_CASE("randomized equality testing is sound on a seeded family") {
    auto reg = reg2();
    auto q1 = Polynomial::variable(reg, 0);
    auto q2 = Polynomial::variable(reg, 1);
    auto mu = Polynomial::variable(reg, reg->muIndex());

    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> coeff(-4, 4);
    for (int iter = 0; iter < 25; ++iter) {
        Polynomial num = q1 * mpq_class(coeff(rng)) + q2 * mpq_class(coeff(rng)) +
                         mu * mpq_class(coeff(rng)) + Polynomial::constant(reg, coeff(rng));
        Polynomial den = q1 - q2 + mu * mpq_class(1 + std::abs(coeff(rng)));
        auto a = RationalFunction::fraction(num, den);
        auto b = RationalFunction::fraction(num * den, den * den); // same value, unreduced build
        auto cert = rfEqualRandom(a, b, 3, 1000 + iter);
        CHECK(cert.equal);
        if (!num.isZero()) {
            auto bad = a + RationalFunction::fraction(Polynomial::constant(reg, 1), den);
            CHECK(!rfEqualRandom(a, bad, 3, 1000 + iter).equal);
        }
    }
}

TEST_CASE("modular arithmetic building blocks") {
    const uint64_t p = modp::kPrime;
    CHECK(modp::mulmod(p - 1, p - 1, p) == 1); // (-1)^2
    for (uint64_t a : {uint64_t{2}, uint64_t{12345}, p - 3})
        CHECK(modp::mulmod(a, modp::invmod(a, p), p) == 1);
    CHECK(modp::rationalMod(mpq_class(1, 2), p) == modp::invmod(2, p));
}

TEST_CASE("pole-aware modular evaluation") {
    auto reg = reg2();
    auto q1 = Polynomial::variable(reg, 0);
    auto q2 = Polynomial::variable(reg, 1);
    auto f = RationalFunction::fraction(Polynomial::constant(reg, 1), q1 - q2);
    std::vector<uint64_t> pt = {5, 5, 1};
    CHECK_THROWS_AS(f.evalMod(pt, modp::kPrime), PoleError);
    pt[1] = 3;
    CHECK(f.evalMod(pt, modp::kPrime) == modp::invmod(2, modp::kPrime));
}
