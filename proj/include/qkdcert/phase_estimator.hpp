#pragma once

#include "qkdcert/numerics.hpp"

namespace qkdcert {

// Fractions and error rates estimated in the public comparison phase.
struct EstimatedStats {
  Probability q_x;      // nonvacuum fraction, a = X, b = X
  Probability q_z;      // nonvacuum fraction, a = Z, b = Z
  Probability q_ph;     // nonvacuum fraction, a = Z, b = X
  Probability delta_x;  // X-basis error rate
  Probability delta_z;  // Z-basis error rate

  EstimatedStats() = default;
  EstimatedStats(double q_x, double q_z, double q_ph, double delta_x,
                 double delta_z);
};

// Worst-case phase error rate consistent with the observed statistics.
struct PhaseErrorBound {
  double delta_ph = 0.0;        // constraint solution, clamped to [0, 1/2]
  double delta_ph_tilde = 0.0;  // after the detector-leakage correction
  bool clamped = false;
  bool feasible = false;
};

// Right-hand side of the phase-error constraint at trial value delta:
//   sqrt(q_x (1 - delta_x) q_ph (1 - delta))
//     + sqrt(q_x delta_x q_ph delta)
//     + sqrt((1 - q_x)(1 - q_ph))
double rhs_g(double delta, Probability q_x, Probability delta_x,
             Probability q_ph);

// Largest delta in [delta_x, 1] with rhs_g(delta) >= 1 - 2 delta_src, found by
// bisection to 1e-10 and clamped to 1/2 (clamped flag set when that happens).
// Throws inconsistent_statistics when even delta = delta_x, where the
// right-hand side is maximal, violates the constraint.
PhaseErrorBound solve_delta_ph(const EstimatedStats& stats, double delta_src);

// Symmetric-loss convenience form: q_x = q_ph = q. Same code path as the
// general solver.
PhaseErrorBound solve_delta_ph_symmetric(Probability q, Probability delta_x,
                                         double delta_src);

// Published closed-form bound for the symmetric case, evaluated verbatim:
//   min{1/2, delta_x + 8 x ((1-x)(1-2 delta_x)
//       + sqrt(x (1-x) delta_x (1-delta_x)))},  x = delta_src / q.
// Looser than the numeric solver; kept for comparison.
double closed_form_delta_ph(Probability q, Probability delta_x,
                            double delta_src);

// delta_ph_tilde = min(1/2, delta_ph + epsilon_z / (q_ph eta_z)); a vanishing
// denominator with epsilon_z > 0 yields total uncertainty (1/2).
PhaseErrorBound apply_leakage(const PhaseErrorBound& bound, Probability q_ph,
                              double eta_z, double epsilon_z);

}  // namespace qkdcert
