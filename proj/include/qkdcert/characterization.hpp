#pragma once

#include "qkdcert/hermitian.hpp"
#include "qkdcert/numerics.hpp"

namespace qkdcert {

// The three bounds that characterize a setup: source basis dependence Delta,
// detector blinding parameter eta_Z, detector leakage parameter epsilon_Z.
struct ImperfectionParams {
  double delta = 0.0;      // F(rho_Z, rho_X) >= 1 - 2 delta, delta in [0, 1/2]
  double eta_z = 1.0;      // minimum detection probability of a nonvacuum state
  double epsilon_z = 0.0;  // trace-distance bound on detector back-leakage

  ImperfectionParams() = default;
  ImperfectionParams(double delta, double eta_z, double epsilon_z);
};

// Uhlmann fidelity F(rho, sigma) = Tr sqrt(sqrt(rho) sigma sqrt(rho)).
double fidelity(const HermitianOperator& rho, const HermitianOperator& sigma);

// Tightest Delta consistent with F(rho_z, rho_x) = 1 - 2 Delta.
double basis_dependence(const HermitianOperator& rho_z,
                        const HermitianOperator& rho_x);

// D(rho, sigma) = (1/2) sum |eigenvalues of rho - sigma|.
double trace_distance(const HermitianOperator& rho,
                      const HermitianOperator& sigma);

// Minimum of <phi|E|phi> over unit vectors in the support of the projector:
// the smallest eigenvalue of the POVM element compressed onto that support.
double blinding_parameter(const HermitianOperator& povm_element,
                          const HermitianOperator& projector);

// Splits per-outcome detector efficiencies into a common loss (absorbed into
// the channel) and the residual efficiency ratio. The residual is the eta_Z
// to certify with for beamsplitter-model detectors.
struct CommonLossSplit {
  double common;
  double residual_eta;
};
CommonLossSplit factor_common_loss(Probability eta0, Probability eta1);

}  // namespace qkdcert
