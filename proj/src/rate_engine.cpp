#include "qkdcert/rate_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace qkdcert {

namespace {
// Largest u with h'(u)(1-u) >= 1, the step that folds the leakage term into
// the entropy argument. Without leakage the bound is proven on all of
// [0, 1/2], which is also where the source-flaw threshold lives.
constexpr double kLeakageValidityLimit = 0.277;

RateCertificate assemble(const EstimatedStats& stats,
                         const ImperfectionParams& echo, double delta_ph,
                         double u, double q_numerator, double eta_z,
                         bool leakage_active) {
  if (stats.q_z.value() <= 0.0) {
    throw std::invalid_argument("rate: no sifted key (q_z = 0)");
  }
  const bool valid = leakage_active ? (u <= kLeakageValidityLimit) : (u <= 0.5);
  const double bracket = valid ? 1.0 - binary_entropy(std::min(u, 0.5)) : 0.0;

  RateCertificate cert;
  cert.rate = eta_z * (q_numerator / stats.q_z.value()) * bracket -
              binary_entropy(stats.delta_z.value());
  cert.delta_ph = delta_ph;
  cert.delta_ph_tilde = std::min(u, 0.5);
  cert.valid_region = valid;
  cert.positive = valid && cert.rate > 0.0;
  cert.stats = stats;
  cert.imperfections = echo;
  return cert;
}

void check_unit_interval(double v, const char* what) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw std::invalid_argument(std::string(what) + " outside [0, 1]");
  }
}
}  // namespace

RateCertificate rate_detector_only(const EstimatedStats& stats, double eta_z,
                                   double epsilon_z) {
  check_unit_interval(eta_z, "rate_detector_only: eta_z");
  check_unit_interval(epsilon_z, "rate_detector_only: epsilon_z");
  const double dx = stats.delta_x.value();
  const bool leakage = epsilon_z > 0.0;
  double u = dx;
  if (leakage) {
    const double denom = stats.q_x.value() * eta_z;
    u = denom > 0.0 ? dx + epsilon_z / denom
                    : std::numeric_limits<double>::infinity();
  }
  return assemble(stats, ImperfectionParams(0.0, eta_z, epsilon_z), dx, u,
                  stats.q_x.value(), eta_z, leakage);
}

RateCertificate rate_general(const EstimatedStats& stats,
                             const PhaseErrorBound& bound, double eta_z) {
  check_unit_interval(eta_z, "rate_general: eta_z");
  if (!bound.feasible) {
    throw std::invalid_argument("rate_general: phase-error bound not feasible");
  }
  if (!(bound.delta_ph >= 0.0 && bound.delta_ph <= 0.5) ||
      !(bound.delta_ph_tilde >= bound.delta_ph - 1e-12 &&
        bound.delta_ph_tilde <= 0.5)) {
    throw std::invalid_argument("rate_general: malformed phase-error bound");
  }
  // Leakage is recognized by the gap the correction left between the two
  // bounds; at the 1/2 clamp the distinction is immaterial (bracket is zero).
  const bool leakage = bound.delta_ph_tilde > bound.delta_ph;
  return assemble(stats, ImperfectionParams(0.0, eta_z, 0.0), bound.delta_ph,
                  bound.delta_ph_tilde, stats.q_ph.value(), eta_z, leakage);
}

RateCertificate certify(const EstimatedStats& stats,
                        const ImperfectionParams& imperfections) {
  PhaseErrorBound bound = solve_delta_ph(stats, imperfections.delta);
  bound = apply_leakage(bound, stats.q_ph, imperfections.eta_z,
                        imperfections.epsilon_z);
  return assemble(stats, imperfections, bound.delta_ph, bound.delta_ph_tilde,
                  stats.q_ph.value(), imperfections.eta_z,
                  imperfections.epsilon_z > 0.0);
}

double rate_ideal(Probability delta_x, Probability delta_z) {
  return 1.0 - binary_entropy(delta_x.value()) -
         binary_entropy(delta_z.value());
}

}  // namespace qkdcert
