#pragma once

#include "qkdcert/characterization.hpp"
#include "qkdcert/phase_estimator.hpp"

namespace qkdcert {

// Certified asymptotic secure-key rate together with the intermediate
// quantities and validity flags that justify it.
struct RateCertificate {
  double rate = 0.0;  // R_Z; negative values are reported as-is
  double delta_ph = 0.0;
  double delta_ph_tilde = 0.0;
  bool valid_region = false;  // the bound is proven at this delta_ph_tilde
  bool positive = false;      // rate > 0 and valid_region
  EstimatedStats stats;       // input echo
  ImperfectionParams imperfections;  // input echo
};

// Perfect-source rate:
//   R_Z >= eta_z (q_x / q_z) [1 - h(delta_x + epsilon_z / (q_x eta_z))]
//          - h(delta_z).
// The certificate echoes delta = 0 (the perfect-source assumption).
RateCertificate rate_detector_only(const EstimatedStats& stats, double eta_z,
                                   double epsilon_z);

// General rate R_Z >= eta_z (q_ph / q_z) [1 - h(delta_ph_tilde)] - h(delta_z).
RateCertificate rate_general(const EstimatedStats& stats,
                             const PhaseErrorBound& bound, double eta_z);

// Full pipeline: solve_delta_ph -> apply_leakage -> general rate, recording
// every intermediate value in the certificate.
RateCertificate certify(const EstimatedStats& stats,
                        const ImperfectionParams& imperfections);

// Baseline 1 - h(delta_x) - h(delta_z) (unit efficiency, matched fractions).
double rate_ideal(Probability delta_x, Probability delta_z);

}  // namespace qkdcert
