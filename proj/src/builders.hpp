#pragma once

#include "checks.hpp"

namespace dynrefl {

/// Affine spectral-variable map z -> s*z + c; absent for spectral-free models.
struct SpectralMap {
    bool present = false;
    mpq_class s{-1};
    mpq_class c{0};
};

/// One differing entry of an entrywise matrix comparison.
struct EntryDiff {
    MultiIndex row, col;
    std::string built, reference;
};

/// Entries where the two matrices disagree (symbolic difference nonzero).
std::vector<EntryDiff> entrywiseDiff(const TensorMatrix& built, const TensorMatrix& reference);

/// B = (A12^{t1})^{sc1}, C = (A21^{t2})^{sc2}, D = (A21^{t1 t2})^{sl1,sl2}.
/// Strict mode verifies the premises on A (unitarity, zero weight, the
/// A-equation) and the full closure of the result (all four coupled
/// Yang-Baxter equations, D-unitarity, B12 = C21) before returning.
ABCDQuadruple buildBCDFromA(const TensorMatrix& A, AlgebraSignature sig = {1, 1},
                            bool strict = true, const CheckMode& mode = {});

/// The transposed Lax matrix (T^t)^{sc}: transposition and column-weight shift
/// on the auxiliary leg "1" only. Strict mode re-verifies the exchange
/// premise on T against the quadruple.
TensorMatrix buildTransposedLax(const TensorMatrix& T, const ABCDQuadruple& q,
                                bool strict = true, const CheckMode& mode = {});

/// Admission record for a one-leg gamma: the full reflection equation with a
/// quantum-space-trivial K (primary) and the shiftless exchange condition
/// A g1 B g2 = g2 C g1 D (secondary).
struct GammaAdmission {
    VerificationReport reflection;
    VerificationReport shiftless;
};
GammaAdmission admitGamma(const TensorMatrix& gamma, const ABCDQuadruple& q,
                          const CheckMode& mode = {});

/// K = T gamma(q - h^(quantum)) Tc on (auxiliary x quantum) legs.
/// Strict mode requires gamma to pass its primary admission test and the
/// result to pass the reflection equation.
TensorMatrix buildKFromTGamma(const TensorMatrix& T, const TensorMatrix& gamma,
                              const ABCDQuadruple& q, bool strict = true,
                              const CheckMode& mode = {});

/// Kt = L(q) K(q + alpha h^(quantum)) J(q) on the enlarged leg set. Strict
/// mode verifies the five coaction premises for (L, J, alpha) and the
/// reflection equation for the dressed result.
TensorMatrix coactionDress(const TensorMatrix& K, const TensorMatrix& L,
                           const TensorMatrix& J, int alpha, const ABCDQuadruple& q,
                           bool strict = true, const CheckMode& mode = {});

/// Homogeneous bulk monodromy over `sites` quantum legs a1..am:
/// the ordered product of A_{1,ai} with cumulative dynamical shifts,
/// normalized so that the result satisfies the Lax exchange relation with
/// h^(q) = sum_i h^(ai). Strict mode verifies that relation.
TensorMatrix monodromy(const TensorMatrix& A, int sites, const ABCDQuadruple& q,
                       bool strict = true, const CheckMode& mode = {});

/// Dual quadruple: At = (A^{-1})^{t1 t2}, Bt = ((B^{t2})^{-1})^{t1},
/// Ct = ((C^{t1})^{-1})^{t2}, Dt = (D^{t1 t2})^{-1}. Strict mode verifies
/// Ct12 = Bt21 and that the dual matrices again satisfy the B,C,D-from-A
/// inter-relations.
ABCDQuadruple buildDualABCD(const ABCDQuadruple& q, bool strict = true,
                            const CheckMode& mode = {});

/// The three B,C,D-from-A inter-relations evaluated on a dual quadruple, in
/// order (B, C, D). For the rational model only the D-relation survives
/// dualization; the B and C forms differ structurally (the dual B picks up
/// irreducible quadratic denominators no decorated dual A can produce), so
/// the verdicts are reported rather than required.
std::vector<VerificationReport> dualInterRelations(const ABCDQuadruple& dual,
                                                   const CheckMode& mode = {});

enum class FuseSide { Left, Right };

/// Fused solution and coefficient matrices on a composite two-leg slot.
/// Left: composite <11'> on legs ("1","1p"); right: composite <22'> on
/// ("2","2p"). K_<aa'> = K'_{a'}(q-h^(a)) B_{a'a}(q) K_a(q+h^(a')). The
/// fused K lives on the composite legs; the coefficient matrices returned
/// are the four double-fused ones on ("1","1p","2","2p"), ready for the
/// composite exchange relation.
struct FusedSolution {
    TensorMatrix K;                      // on the composite legs
    TensorMatrix A, B, C, D;             // double-fused, on all four legs
    std::vector<std::string> composite;  // leg ids of the composite slot
    std::vector<std::string> other;      // leg ids of the opposite slot
};
FusedSolution fuse(const TensorMatrix& K, const TensorMatrix& Kprime,
                   const ABCDQuadruple& q, FuseSide side, bool strict = true,
                   const CheckMode& mode = {});

/// Single-slot fused coefficient matrix: the composite pair (x, xp) fused in
/// the first slot against y (side Left), or (y, yp) in the second slot
/// against x (side Right). Used for iterated fusion and the dressing setup.
TensorMatrix fusedCoefficient(const ABCDQuadruple& q, char which, FuseSide side,
                              const std::string& a, const std::string& ap,
                              const std::string& b, const std::vector<Leg>& ambient);

/// Double-fused coefficient matrix on legs ("1","1p","2","2p"), built by
/// fusing the first slot then the second (leftFirst) or the other way round;
/// the two orders agree (see fusedOrderIndependence).
TensorMatrix doubleFusedCoefficient(const ABCDQuadruple& q, char which, bool leftFirst,
                                    const std::vector<Leg>& ambient);

/// Exchange relation for a fused K over composite legs against a plain K on
/// the opposite (single) slot, using the single-slot fused coefficients.
VerificationReport checkFusedExchange(const FusedSolution& f, const TensorMatrix& Kother,
                                      const ABCDQuadruple& q, const CheckMode& mode = {});

/// A_{<11'><22'>} A_{<22'><11'>} = I, same for D, and C_{<11'><22'>} equals
/// B with the composite slots swapped.
VerificationReport checkFusedUnitarity(const ABCDQuadruple& q, const CheckMode& mode = {});

/// Compares the two fusion orders (first slot then second vs the reverse)
/// for each of A, B, C, D; returned in that order.
std::vector<VerificationReport> fusedOrderIndependence(const ABCDQuadruple& q,
                                                       const CheckMode& mode = {});

/// Dressing operators on legs "1".."spaces":
/// Q = Ac_21(q) Ac_32(q-h1) ... Ac_{k,k-1}(q-h1-..-h^{k-2});
/// S = Dc_21(q+h3+..+hk) ... Dc_{k,k-1}(q), with Mc = P * M. Strict mode
/// verifies the four commutation relations against iteratively fused
/// coefficient matrices and the weight condition.
struct DressingPair {
    TensorMatrix Q, S;
    std::vector<std::string> legsN;
};
DressingPair buildDressingQS(const ABCDQuadruple& q, int spaces, bool strict = true,
                             const CheckMode& mode = {});

/// The four commutation relations plus the weight condition for a dressing
/// pair, against iteratively fused N-slot coefficient matrices.
VerificationReport verifyDressing(const DressingPair& p, const ABCDQuadruple& q,
                                  const CheckMode& mode = {});

/// K+ = ((KK^t(z + eta/2))^{-1})^{-sc} for a spectral model; zVar indexes the
/// spectral variable, eta is a registry polynomial (typically a parameter).
TensorMatrix buildKplusCrossing(const TensorMatrix& KK, int zVar, const Polynomial& eta);

} // namespace dynrefl
