#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "polynomial.hpp"

namespace dynrefl {

struct PoleError : Error {
    explicit PoleError(const std::string& what) : Error(what) {}
};

/// Integer-primitive linear form  sum_k c_k x_k + c0  with positive leading
/// coefficient. Denominators are (multi)sets of these.
class LinearForm {
public:
    LinearForm() = default;
    LinearForm(std::vector<mpz_class> coeffs, mpz_class constant);

    /// poly == scalar * form when poly has total degree <= 1 and is nonconstant.
    static std::optional<std::pair<mpq_class, LinearForm>> fromPolynomial(const Polynomial& p);

    Polynomial toPolynomial(const RegistryPtr& reg) const;

    /// q_k -> q_k + v_k mu keeps a linear form a linear form.
    LinearForm shiftQ(const RegistryPtr& reg, const std::vector<int>& v) const;

    mpq_class eval(const std::vector<mpq_class>& point) const;
    uint64_t evalMod(const std::vector<uint64_t>& point, uint64_t p) const;

    std::string toString(const RegistryPtr& reg) const;

    bool operator<(const LinearForm& o) const;
    bool operator==(const LinearForm& o) const {
        return coeffs_ == o.coeffs_ && constant_ == o.constant_;
    }

    const std::vector<mpz_class>& coeffs() const { return coeffs_; }
    const mpz_class& constant() const { return constant_; }

private:
    std::vector<mpz_class> coeffs_;
    mpz_class constant_ = 0;
};

struct EqualityCertificate {
    bool equal = true;
    bool exact = true;
    int trials = 0;
    uint64_t seed = 0;
    int64_t degreeBound = 0;
    /// Schwartz-Zippel style failure probability bound (degree/p)^trials, as a string.
    std::string failureBound;
};

/// Exact quotient of a polynomial by a multiset of linear forms, with a
/// general-polynomial denominator fallback for the rare non-factorable case.
class RationalFunction {
public:
    RationalFunction() = default;
    explicit RationalFunction(Polynomial num);
    RationalFunction(Polynomial num, std::map<LinearForm, int> den, Polynomial denPoly);

    static RationalFunction zero(const RegistryPtr& reg);
    static RationalFunction one(const RegistryPtr& reg);
    static RationalFunction constant(const RegistryPtr& reg, const mpq_class& c);
    static RationalFunction variable(const RegistryPtr& reg, int var);
    /// num / den with den an arbitrary nonzero polynomial.
    static RationalFunction fraction(Polynomial num, Polynomial den);

    const RegistryPtr& registry() const { return num_.registry(); }
    const Polynomial& numerator() const { return num_; }
    const std::map<LinearForm, int>& denFactors() const { return den_; }
    const Polynomial& denTail() const { return denPoly_; }
    Polynomial denominatorPolynomial() const;

    bool isZero() const { return num_.isZero(); }
    bool isConstant() const { return num_.isConstant() && den_.empty() && denPoly_.isConstant(); }
    /// True when the general-polynomial denominator fallback is active.
    bool usesDenFallback() const { return !denPoly_.isConstant(); }

    RationalFunction operator-() const;
    RationalFunction operator+(const RationalFunction& o) const;
    RationalFunction operator-(const RationalFunction& o) const;
    RationalFunction operator*(const RationalFunction& o) const;
    RationalFunction operator/(const RationalFunction& o) const;
    RationalFunction operator*(const mpq_class& c) const;

    /// Structural (canonical-form) identity; value equality is rfEqualExact.
    bool operator==(const RationalFunction& o) const {
        return num_ == o.num_ && den_ == o.den_ && denPoly_ == o.denPoly_;
    }
    bool operator!=(const RationalFunction& o) const { return !(*this == o); }

    RationalFunction reciprocal() const;

    /// q_k -> q_k + v_k mu.
    RationalFunction shiftQ(const std::vector<int>& v) const;

    RationalFunction derivative(int var) const;
    RationalFunction substitute(int var, const Polynomial& repl) const;

    mpq_class eval(const std::vector<mpq_class>& point) const;
    /// Evaluation in F_p at q_k -> point[q_k] + qShift[k]*point[mu]; throws
    /// PoleError when a denominator factor vanishes at the point.
    uint64_t evalMod(const std::vector<uint64_t>& point, uint64_t p,
                     const std::vector<int>* qShift = nullptr) const;

    int64_t degreeBound() const;

    std::string toString() const;

private:
    void normalize();

    Polynomial num_;
    std::map<LinearForm, int> den_;
    Polynomial denPoly_; // general fallback; constant 1 when inactive
};

bool rfEqualExact(const RationalFunction& a, const RationalFunction& b);
EqualityCertificate rfEqualRandom(const RationalFunction& a, const RationalFunction& b,
                                  int trials, uint64_t seed);
EqualityCertificate rfEqual(const RationalFunction& a, const RationalFunction& b,
                            bool exact, int trials = 3, uint64_t seed = 0);

/// Taylor coefficients of var^0..var^order; requires regularity at var = 0.
std::vector<RationalFunction> seriesExpand(const RationalFunction& a, int var, int order);

RationalFunction parseRationalFunction(const RegistryPtr& reg, const std::string& text);

} // namespace dynrefl
