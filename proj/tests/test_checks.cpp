#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "checks.hpp"
#include "doctest.h"

using namespace dynrefl;

TEST_CASE("structure suite passes exactly at n=2 and n=3") {
    for (int n : {2, 3}) {
        CAPTURE(n);
        auto model = rationalModel(n);
        auto quad = quadrupleOf(model);
        CheckMode exact;
        CHECK(checkUnitarity(quad, exact).pass);
        CHECK(checkZeroWeight(quad, {1, 1}).pass);
        for (char v : {'a', 'b', 'c', 'd'}) {
            CAPTURE(v);
            CHECK(checkDYBE(quad, v, {1, 1}, exact).pass);
        }
    }
}

TEST_CASE("all three scalar solutions pass the reflection equation") {
    for (int n : {2, 3}) {
        auto model = rationalModel(n);
        auto quad = quadrupleOf(model);
        CheckMode exact;
        for (auto kind : {GammaKind::RankOne, GammaKind::AntisymScaled, GammaKind::Diagonal})
            CHECK(checkReflection(gammaSolution(model, kind), quad, {1, 1}, exact).pass);
        // the diagonal family admits an arbitrary function through shift-coherent ratios
        Polynomial f = Polynomial::variable(model.reg, 0) +
                       Polynomial::variable(model.reg, 1) * mpq_class(2) +
                       Polynomial::constant(model.reg, 3);
        CHECK(checkReflection(gammaSolution(model, GammaKind::Diagonal, f), quad, {1, 1}, exact)
                  .pass);
    }
}

TEST_CASE("random mode agrees with exact mode and detects perturbations") {
    auto model = rationalModel(3);
    auto quad = quadrupleOf(model);
    CheckMode rnd{false, 3, 42};
    for (char v : {'a', 'b', 'c', 'd'}) CHECK(checkDYBE(quad, v, {1, 1}, rnd).pass);

    auto bad = quad;
    bad.A.set({0, 1}, {1, 0}, RationalFunction::constant(model.reg, 7));
    auto rRnd = checkDYBE(bad, 'a', {1, 1}, rnd);
    auto rExact = checkDYBE(bad, 'a', {1, 1}, CheckMode{});
    CHECK(!rRnd.pass);
    CHECK(!rExact.pass);
    REQUIRE(rExact.witness.has_value());
    CHECK(!rExact.witness->residual.empty());
}

TEST_CASE("signature matters: the solutions are tied to (1,1)") {
    auto model = rationalModel(2);
    auto quad = quadrupleOf(model);
    auto g = gammaSolution(model, GammaKind::AntisymScaled);
    CHECK(checkReflection(g, quad, {1, 1}, CheckMode{}).pass);
    CHECK(!checkReflection(g, quad, {0, 1}, CheckMode{}).pass);
}

TEST_CASE("classical limit satisfies the four classical equations") {
    for (int n : {2, 3}) {
        auto quad = quadrupleOf(rationalModel(n));
        CHECK(checkClassicalLimit(quad, {1, 1}, CheckMode{}).pass);
    }
}

TEST_CASE("classical limit extracts antisymmetric a and d") {
    auto quad = quadrupleOf(rationalModel(2));
    auto cl = classicalLimit(quad);
    CHECK((cl.a + swapTemplateLegs(cl.a)).isZero());
    CHECK((cl.d + swapTemplateLegs(cl.d)).isZero());
    CHECK((cl.c - swapTemplateLegs(cl.b)).isZero());
}

TEST_CASE("commutator checker distinguishes commuting from non-commuting pairs") {
    auto model = rationalModel(2);
    auto H = hamiltonianClosedForm(model);
    auto trans = ShiftOperator::pureShift(model.reg, {2, 2});
    CHECK(checkCommutatorZero(H, trans, CheckMode{}).pass);
    auto oneSided = ShiftOperator::pureShift(model.reg, {2, 0});
    CHECK(!checkCommutatorZero(H, oneSided, CheckMode{}).pass);
}

TEST_CASE("report JSON is stable without timing") {
    auto quad = quadrupleOf(rationalModel(2));
    auto r1 = checkUnitarity(quad, CheckMode{});
    auto r2 = checkUnitarity(quad, CheckMode{});
    CHECK(r1.toJson(false) == r2.toJson(false));
    CHECK(r1.toJson(false).find("millis") == std::string::npos);
}
