#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "registry.hpp"

namespace dynrefl {

using Exponents = std::vector<int32_t>;

/// Graded lexicographic order over the registry's variable order.
struct GradedLexLess {
    bool operator()(const Exponents& a, const Exponents& b) const {
        int64_t da = 0, db = 0;
        for (auto e : a) da += e;
        for (auto e : b) db += e;
        if (da != db) return da < db;
        return a < b;
    }
};

/// Sparse multivariate polynomial with exact rational coefficients.
/// No zero coefficients are ever stored.
class Polynomial {
public:
    using TermMap = std::map<Exponents, mpq_class, GradedLexLess>;

    Polynomial() = default;
    explicit Polynomial(RegistryPtr reg) : reg_(std::move(reg)) {}

    static Polynomial constant(RegistryPtr reg, const mpq_class& c);
    static Polynomial variable(RegistryPtr reg, int varIndex, int power = 1);

    const RegistryPtr& registry() const { return reg_; }
    const TermMap& terms() const { return terms_; }
    bool isZero() const { return terms_.empty(); }
    bool isConstant() const;
    /// Value of a constant polynomial (0 if zero).
    mpq_class constantValue() const;

    int64_t totalDegree() const;
    int degreeIn(int var) const;
    bool dependsOn(int var) const { return degreeIn(var) > 0; }

    Polynomial operator-() const;
    Polynomial operator+(const Polynomial& o) const;
    Polynomial operator-(const Polynomial& o) const;
    Polynomial operator*(const Polynomial& o) const;
    Polynomial operator*(const mpq_class& c) const;
    bool operator==(const Polynomial& o) const { return terms_ == o.terms_; }
    bool operator!=(const Polynomial& o) const { return !(*this == o); }

    Polynomial pow(int e) const;

    /// Exact partial derivative.
    Polynomial derivative(int var) const;

    /// q_k -> q_k + v_k * mu for every q-variable simultaneously.
    Polynomial shiftQ(const std::vector<int>& v) const;

    /// Replace one variable by an arbitrary polynomial.
    Polynomial substitute(int var, const Polynomial& repl) const;

    /// Coefficient polynomials of var^0..var^maxDeg (each independent of var).
    std::vector<Polynomial> coefficientsIn(int var) const;

    mpq_class eval(const std::vector<mpq_class>& point) const;
    /// Evaluation in F_p; point values must already be reduced mod p.
    uint64_t evalMod(const std::vector<uint64_t>& point, uint64_t p) const;

    /// Leading coefficient in graded-lex order (0 for the zero polynomial).
    mpq_class leadingCoeff() const;

    /// gcd of all coefficients (as positive rational; 0 for zero polynomial).
    mpq_class content() const;

    /// Quotient when the division is exact, nullopt otherwise.
    std::optional<Polynomial> divideExact(const Polynomial& divisor) const;

    void addTerm(const Exponents& e, const mpq_class& c);

    std::string toString() const;

    /// Whole-polynomial gcd, monic content-normalized. Degree-bounded: returns 1
    /// when the inputs are too large for the primitive PRS to be worthwhile.
    static Polynomial gcd(const Polynomial& a, const Polynomial& b);

private:
    RegistryPtr reg_;
    TermMap terms_;
};

/// Parse the expanded monomial form produced by Polynomial::toString.
Polynomial parsePolynomial(const RegistryPtr& reg, const std::string& text);

namespace modp {
constexpr uint64_t kPrime = 4611686018427387847ULL; // 2^62 - 57

inline uint64_t mulmod(uint64_t a, uint64_t b, uint64_t p) {
    return static_cast<uint64_t>((static_cast<unsigned __int128>(a) * b) % p);
}
uint64_t powmod(uint64_t a, uint64_t e, uint64_t p);
uint64_t invmod(uint64_t a, uint64_t p);
/// Reduce an exact rational into F_p; throws if the denominator vanishes mod p.
uint64_t rationalMod(const mpq_class& q, uint64_t p);
} // namespace modp

} // namespace dynrefl
