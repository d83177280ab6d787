#pragma once

#include <map>
#include <vector>

#include "ratfun.hpp"

namespace dynrefl {

/// Element of the skew difference-operator algebra: a finite sum
///   sum_v f_v(q) e^{mu v.d}     (v an integer vector over the q-block)
/// with product rule (f e^v)(g e^w) = f * shift(g, v) * e^{v+w}.
/// Coefficients stay on the left; no zero coefficients are stored.
class ShiftOperator {
public:
    using TermMap = std::map<std::vector<int>, RationalFunction>;

    ShiftOperator() = default;
    explicit ShiftOperator(RegistryPtr reg) : reg_(std::move(reg)) {}

    static ShiftOperator zero(const RegistryPtr& reg) { return ShiftOperator(reg); }
    static ShiftOperator fromRational(RationalFunction f);
    /// Pure lattice shift e^{mu v.d}.
    static ShiftOperator pureShift(const RegistryPtr& reg, const std::vector<int>& v);

    const RegistryPtr& registry() const { return reg_; }
    const TermMap& terms() const { return terms_; }
    bool isZero() const { return terms_.empty(); }
    /// True iff the operator is a plain multiplication operator (single v=0 term or zero).
    bool isMultiplication() const;
    /// The v=0 coefficient (zero if absent).
    RationalFunction rationalPart() const;

    void addTerm(const std::vector<int>& v, const RationalFunction& f);

    ShiftOperator operator-() const;
    ShiftOperator operator+(const ShiftOperator& o) const;
    ShiftOperator operator-(const ShiftOperator& o) const;
    ShiftOperator operator*(const ShiftOperator& o) const;
    bool operator==(const ShiftOperator& o) const { return terms_ == o.terms_; }
    bool operator!=(const ShiftOperator& o) const { return !(*this == o); }

    ShiftOperator commutator(const ShiftOperator& o) const;

    /// Substitute q_k -> q_k + w_k mu in every coefficient (the lattice part is
    /// untouched: conjugation by e^{mu w.d} only shifts the coefficients).
    ShiftOperator shiftCoefficients(const std::vector<int>& w) const;

    /// Apply to a function given as q-lattice samples: (f e^v g)(q) = f(q) g(q + mu v).
    /// Used by tests that certify operators by action on concrete functions.
    RationalFunction apply(const RationalFunction& g) const;

    EqualityCertificate equal(const ShiftOperator& o, bool exact,
                              int trials = 3, uint64_t seed = 0) const;

private:
    RegistryPtr reg_;
    TermMap terms_;
};

} // namespace dynrefl
