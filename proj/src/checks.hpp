#pragma once

#include "models.hpp"

namespace dynrefl {

/// Shift-coefficient pair (eps_R, eps_L); only the relative sign matters in
/// the paper, instantiated values are in {-1, 0, 1}.
struct AlgebraSignature {
    int epsR = 1;
    int epsL = 1;
};

struct CheckMode {
    bool exact = true;
    int trials = 3;
    uint64_t seed = 0;
};

/// Structure-matrix quadruple on a common two-leg template ("1","2").
struct ABCDQuadruple {
    RegistryPtr reg;
    std::vector<Leg> legTemplate;
    TensorMatrix A, B, C, D;
    AlgebraSignature sig{1, 1};
};

ABCDQuadruple quadrupleOf(const RationalModel& m);
ABCDQuadruple identityQuadruple(const RegistryPtr& reg, int n);

/// LHS = RHS for ordered factor products over a common ambient leg set.
/// Exact mode multiplies symbolically; random mode evaluates each factor over
/// F_p at shared sample points (factors must be rational-valued; otherwise an
/// exact fallback is taken and noted).
VerificationReport compareProducts(const std::string& identity, const std::string& anchor,
                                   const std::vector<TensorMatrix>& lhs,
                                   const std::vector<TensorMatrix>& rhs,
                                   const CheckMode& mode);

/// One of the four coupled dynamical Yang-Baxter equations (variants a..d).
VerificationReport checkDYBE(const ABCDQuadruple& q, char variant, AlgebraSignature sig,
                             const CheckMode& mode);

/// A K1(q-eR h2) B K2(q+eL h1) = K2(q-eR h1) C K1(q+eL h2) D. K lives on the
/// aux template leg "1" plus any quantum legs it carries.
VerificationReport checkReflection(const TensorMatrix& K, const ABCDQuadruple& q,
                                   AlgebraSignature sig, const CheckMode& mode);

/// Dual reflection equation with sc-decorated K+ factors.
VerificationReport checkDualReflection(const TensorMatrix& Kplus, const ABCDQuadruple& dual,
                                       const CheckMode& mode);

/// A12 A21 = I = D12 D21 and C12 = B21.
VerificationReport checkUnitarity(const ABCDQuadruple& q, const CheckMode& mode);

/// Zero-weight conditions for the quadruple at a signature.
VerificationReport checkZeroWeight(const ABCDQuadruple& q, AlgebraSignature sig);

/// A12(q) T1(q-h2) T2(q) = T2(q-h1) T1(q) A12(q-h^(q)), plus the
/// [h1 + h^(q), T] = 0 weight condition. T carries aux leg "1" and its
/// quantum legs (role Quantum).
VerificationReport checkRLL(const TensorMatrix& T, const ABCDQuadruple& q,
                            const CheckMode& mode);

enum class ExchangeKind { Transposed, Crossed };

/// Theorem 3.2's two displayed exchange relations for the transposed Lax
/// matrix Tc against T and the quadruple.
VerificationReport checkCrossedExchange(const TensorMatrix& T, const TensorMatrix& Tc,
                                        const ABCDQuadruple& q, ExchangeKind kind,
                                        const CheckMode& mode);

/// The five coaction premises (th3-a..e) for L, J at integer alpha.
VerificationReport checkCoaction(const TensorMatrix& L, const TensorMatrix& J,
                                 const ABCDQuadruple& q, int alpha, const CheckMode& mode);

/// Dressing relations AQcom..QSh. The fused coefficient matrices A/B/C/D_{NM}
/// live on (N legs + M legs); legsN / legsM name the two groups.
VerificationReport checkDressing(const TensorMatrix& Q, const TensorMatrix& S,
                                 const TensorMatrix& Anm, const TensorMatrix& Bnm,
                                 const TensorMatrix& Cnm, const TensorMatrix& Dnm,
                                 const std::vector<std::string>& legsN,
                                 const std::vector<std::string>& legsM,
                                 const CheckMode& mode);

/// The four classical dynamical Yang-Baxter equations for r = a,b,c,d.
VerificationReport checkClassicalDYBE(const TensorMatrix& a, const TensorMatrix& b,
                                      const TensorMatrix& c, const TensorMatrix& d,
                                      AlgebraSignature sig, const CheckMode& mode);

/// Order-1 coefficients in the scaling mu -> hbar mu of the quadruple.
struct ClassicalLimit {
    TensorMatrix a, b, c, d;
};
ClassicalLimit classicalLimit(const ABCDQuadruple& q);

/// Extracts the classical quadruple and feeds checkClassicalDYBE.
VerificationReport checkClassicalLimit(const ABCDQuadruple& q, AlgebraSignature sig,
                                       const CheckMode& mode);

/// [x, y] = 0 for scalar difference operators.
VerificationReport checkCommutatorZero(const ShiftOperator& x, const ShiftOperator& y,
                                       const CheckMode& mode);

/// Swap the two template legs: M_{21} from M_{12}.
TensorMatrix swapTemplateLegs(const TensorMatrix& m);

/// Human-readable residual for a witness entry.
std::string residualString(const ShiftOperator& op);

} // namespace dynrefl
