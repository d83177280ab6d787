#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "shiftop.hpp"

using namespace dynrefl;

static RegistryPtr reg2() {
    static RegistryPtr r = VariableRegistry::make(2);
    return r;
}

TEST_CASE("skew product rule") {
    auto reg = reg2();
    auto q1 = Polynomial::variable(reg, 0);
    auto q2 = Polynomial::variable(reg, 1);
    auto mu = Polynomial::variable(reg, reg->muIndex());

    // (f e^{v}) (g e^{w}) = f g(q + mu v) e^{v+w}
    ShiftOperator a(reg), b(reg);
    a.addTerm({1, 0}, RationalFunction::fraction(mu, q1 - q2));
    b.addTerm({0, 1}, RationalFunction(q1 - q2));
    ShiftOperator prod = a * b;
    REQUIRE(prod.terms().size() == 1);
    const auto& [v, f] = *prod.terms().begin();
    CHECK(v == std::vector<int>{1, 1});
    // g shifted: q1 - q2 -> q1 + mu - q2
    CHECK(rfEqualExact(f, RationalFunction::fraction(mu * (q1 - q2 + mu), q1 - q2)));

    // opposite order differs: noncommutative algebra
    CHECK(prod != b * a);
}

TEST_CASE("commutator and coefficient shifts") {
    auto reg = reg2();
    auto q1 = Polynomial::variable(reg, 0);

    ShiftOperator x = ShiftOperator::fromRational(RationalFunction(q1));
    ShiftOperator e = ShiftOperator::pureShift(reg, {1, 0});
    // [q1, e^{mu d1}] = q1 e - e q1 = -mu e
    ShiftOperator want(reg);
    want.addTerm({1, 0}, -RationalFunction(Polynomial::variable(reg, reg->muIndex())));
    CHECK(x.commutator(e) == want);

    // conjugation by a lattice shift only moves coefficients
    ShiftOperator a(reg);
    a.addTerm({2, -1}, RationalFunction(q1));
    auto conj = e * a * ShiftOperator::pureShift(reg, {-1, 0});
    CHECK(conj == a.shiftCoefficients({1, 0}));
}

TEST_CASE("action on lattice functions") {
    auto reg = reg2();
    auto q1 = Polynomial::variable(reg, 0);
    auto q2 = Polynomial::variable(reg, 1);
    auto mu = Polynomial::variable(reg, reg->muIndex());

    ShiftOperator op(reg);
    op.addTerm({2, 0}, RationalFunction(mu));
    op.addTerm({0, 0}, RationalFunction(q2));
    RationalFunction g(q1 * q1);
    // (op g)(q) = mu (q1 + 2mu)^2 + q2 q1^2
    auto want = RationalFunction(mu * (q1 + mu * mpq_class(2)) * (q1 + mu * mpq_class(2)) +
                                 q2 * q1 * q1);
    CHECK(rfEqualExact(op.apply(g), want));
}

TEST_CASE("operator equality certificates") {
    auto reg = reg2();
    auto q1 = Polynomial::variable(reg, 0);
    auto q2 = Polynomial::variable(reg, 1);

    ShiftOperator a(reg), b(reg);
    auto f = RationalFunction::fraction(q1 + q2, q1 - q2);
    a.addTerm({1, 1}, f);
    b.addTerm({1, 1}, f * RationalFunction::fraction(q1 - q2, q1 - q2)); // same value
    CHECK(a.equal(b, true).equal);
    auto rnd = a.equal(b, false, 3, 99);
    CHECK(rnd.equal);
    CHECK(!rnd.exact);
    CHECK(rnd.trials == 3);

    b.addTerm({0, 2}, RationalFunction(q1));
    CHECK(!a.equal(b, true).equal);
    CHECK(!a.equal(b, false, 3, 99).equal); // differing support needs no sampling luck
}

TEST_CASE("associativity on a seeded random family") {
    auto reg = reg2();
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> c(-3, 3), s(-1, 1);
    auto randomOp = [&] {
        ShiftOperator op(reg);
        for (int t = 0; t < 3; ++t) {
            Polynomial num = Polynomial::variable(reg, 0) * mpq_class(c(rng)) +
                             Polynomial::variable(reg, 1) * mpq_class(c(rng)) +
                             Polynomial::constant(reg, c(rng));
            if (num.isZero()) continue;
            op.addTerm({s(rng), s(rng)}, RationalFunction(num));
        }
        return op;
    };
    for (int iter = 0; iter < 20; ++iter) {
        auto a = randomOp(), b = randomOp(), c2 = randomOp();
        CHECK(((a * b) * c2).equal((a * (b * c2)), true).equal);
        CHECK(((a + b) * c2).equal(a * c2 + b * c2, true).equal);
    }
}
