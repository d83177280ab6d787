#pragma once

#include <optional>

#include "tensor.hpp"

namespace dynrefl {

/// The rational sl(n) model: structure matrices on a two-leg template
/// ("1","2"), registry q1..qn | mu | m1..mn.
struct RationalModel {
    int n = 0;
    RegistryPtr reg;
    std::vector<Leg> legTemplate; // {"1","2"}
    TensorMatrix A, B, C, D;
};

RationalModel rationalModel(int n);

/// Instantiate a two-leg template matrix on concrete legs of an ambient space.
TensorMatrix onLegs(const TensorMatrix& tmpl, const std::string& legA,
                    const std::string& legB, const std::vector<Leg>& ambient);

enum class GammaKind {
    RankOne,       // gamma_ij = m_i m_j (not invertible)
    AntisymScaled, // gamma_ij = (q_i - q_j) m_i m_j (not invertible)
    Diagonal       // gamma_ii = f(q+mu e_i)/f(q-mu e_i) * prod_{k!=i}(q_i-q_k)
};

/// Scalar reflection-equation solution on one leg ("1"). For the diagonal
/// family the free function enters only through the ratio f(q+mu e_i)/
/// f(q-mu e_i); a concrete polynomial f keeps the ratios shift-coherent
/// (default f = 1).
TensorMatrix gammaSolution(const RationalModel& model, GammaKind kind,
                           const std::optional<Polynomial>& f = std::nullopt);

/// Tr_j( e^{d_j} K KK^{-1} e^{d_j} ) for one-leg rational-valued K, KK.
ShiftOperator hamiltonianFromPair(const TensorMatrix& K, const TensorMatrix& KK);

/// H = sum_l mu m_l^2 / prod_k (q_l - q_k + mu) * e^{2 mu d_{q_l}}.
ShiftOperator hamiltonianClosedForm(const RationalModel& model);

/// Registry for relative/center-of-mass coordinates q = q1-q2, Q = q1+q2.
RegistryPtr relativeRegistry();

/// Rewrite a translation-invariant n=2 operator in (q,Q) coordinates:
/// q_1 = (Q+q)/2, q_2 = (Q-q)/2; a lattice shift (v1,v2) becomes
/// (v1-v2, v1+v2). Throws unless the coefficients are invariant under the
/// simultaneous translation q_k -> q_k + mu.
ShiftOperator reduceN2(const ShiftOperator& H, const RegistryPtr& target);

// ---------------- numerics ----------------

/// log Gamma for positive real arguments (Lanczos), |rel err| <= 1e-12 on
/// [0.5, 20]; reflection formula below 0.5.
double logGamma(double x);
double gammaFn(double x);

enum class Parity { Sin, Cos };
enum class ExponentMode { Paper, Derived }; // coefficient 1/(4mu) vs 1/(2mu)

/// Zero-eigenvalue candidate of the n=2 relative Hamiltonian:
/// Gamma((q+mu)/(4mu)+1/2)/Gamma((q+mu)/(4mu)) * e^{-c q ln(m1/m2)} * trig(k pi q / mu).
struct Eigenfunction {
    int k = 0;
    Parity parity = Parity::Cos;
    double m1 = 1.0, m2 = 1.0, mu = 1.0;
    ExponentMode mode = ExponentMode::Derived;

    double value(double q) const;
};

/// m1^2/(q+mu) psi(q+2mu) - m2^2/(q-mu) psi(q-2mu).
double applyRelativeHamiltonian(const Eigenfunction& e, double q);

} // namespace dynrefl
