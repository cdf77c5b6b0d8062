#include "qkdcert/phase_estimator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "qkdcert/errors.hpp"

namespace qkdcert {

namespace {
constexpr double kBisectTol = 1e-10;
// Guards the feasibility test against roundoff in the square roots; far below
// any statistical resolution of the inputs.
constexpr double kFeasibilitySlack = 1e-12;

double sqrt_nonneg(double x) { return std::sqrt(std::max(0.0, x)); }
}  // namespace

EstimatedStats::EstimatedStats(double q_x_, double q_z_, double q_ph_,
                               double delta_x_, double delta_z_)
    : q_x(q_x_), q_z(q_z_), q_ph(q_ph_), delta_x(delta_x_), delta_z(delta_z_) {}

double rhs_g(double delta, Probability q_x, Probability delta_x,
             Probability q_ph) {
  if (!(delta >= 0.0 && delta <= 1.0)) {
    throw std::invalid_argument("rhs_g: delta outside [0, 1]");
  }
  const double qq = q_x.value() * q_ph.value();
  const double dx = delta_x.value();
  return sqrt_nonneg(qq * (1.0 - dx) * (1.0 - delta)) +
         sqrt_nonneg(qq * dx * delta) +
         sqrt_nonneg((1.0 - q_x.value()) * (1.0 - q_ph.value()));
}

PhaseErrorBound solve_delta_ph(const EstimatedStats& stats, double delta_src) {
  if (!(delta_src >= 0.0 && delta_src <= 0.5)) {
    throw std::invalid_argument("solve_delta_ph: delta must lie in [0, 1/2]");
  }
  if (stats.q_x.value() == 0.0 && stats.q_ph.value() == 0.0) {
    throw std::invalid_argument("solve_delta_ph: q_x or q_ph must be positive");
  }
  const double target = 1.0 - 2.0 * delta_src;
  const double dx = stats.delta_x.value();
  const auto g = [&](double d) {
    return rhs_g(d, stats.q_x, stats.delta_x, stats.q_ph);
  };

  // g peaks at delta = delta_x (Cauchy-Schwarz) and is non-increasing beyond,
  // so the maximal feasible delta lies in [delta_x, 1].
  const double peak = g(dx);
  double solution;
  if (peak < target - kFeasibilitySlack) {
    throw inconsistent_statistics(
        "solve_delta_ph: inconsistent statistics (observed rates violate the "
        "phase-error constraint)");
  } else if (g(1.0) >= target) {
    solution = 1.0;
  } else if (peak <= target) {
    solution = dx;  // equality only at the peak, within roundoff
  } else {
    double lo = dx;
    double hi = 1.0;
    while (hi - lo > kBisectTol) {
      const double mid = 0.5 * (lo + hi);
      if (g(mid) >= target) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    solution = lo;
  }

  PhaseErrorBound bound;
  bound.clamped = solution > 0.5;
  bound.delta_ph = std::min(solution, 0.5);
  bound.delta_ph_tilde = bound.delta_ph;
  bound.feasible = true;
  return bound;
}

PhaseErrorBound solve_delta_ph_symmetric(Probability q, Probability delta_x,
                                         double delta_src) {
  if (q.value() <= 0.0) {
    throw std::invalid_argument("solve_delta_ph_symmetric: q must be positive");
  }
  // q_z and delta_z are not consulted by the solver.
  const EstimatedStats stats(q.value(), 1.0, q.value(), delta_x.value(), 0.0);
  return solve_delta_ph(stats, delta_src);
}

double closed_form_delta_ph(Probability q, Probability delta_x,
                            double delta_src) {
  if (q.value() <= 0.0) {
    throw std::invalid_argument("closed_form_delta_ph: q must be positive");
  }
  if (!(delta_src >= 0.0)) {
    throw std::invalid_argument("closed_form_delta_ph: delta must be >= 0");
  }
  const double x = delta_src / q.value();
  if (x > 1.0 + kFeasibilitySlack) {
    throw std::invalid_argument(
        "closed_form_delta_ph: delta/q must not exceed 1");
  }
  const double dx = delta_x.value();
  const double value =
      dx + 8.0 * x *
               ((1.0 - x) * (1.0 - 2.0 * dx) +
                sqrt_nonneg(x * (1.0 - x) * dx * (1.0 - dx)));
  return std::min(0.5, value);
}

PhaseErrorBound apply_leakage(const PhaseErrorBound& bound, Probability q_ph,
                              double eta_z, double epsilon_z) {
  if (!bound.feasible) {
    throw std::invalid_argument("apply_leakage: bound is not feasible");
  }
  if (!(eta_z >= 0.0 && eta_z <= 1.0)) {
    throw std::invalid_argument("apply_leakage: eta_z outside [0, 1]");
  }
  if (!(epsilon_z >= 0.0 && epsilon_z <= 1.0)) {
    throw std::invalid_argument("apply_leakage: epsilon_z outside [0, 1]");
  }
  PhaseErrorBound out = bound;
  if (epsilon_z == 0.0) {
    out.delta_ph_tilde = bound.delta_ph;
    return out;
  }
  const double denom = q_ph.value() * eta_z;
  const double raw = denom > 0.0
                         ? bound.delta_ph + epsilon_z / denom
                         : std::numeric_limits<double>::infinity();
  out.delta_ph_tilde = std::min(0.5, raw);
  out.clamped = bound.clamped || raw > 0.5;
  return out;
}

}  // namespace qkdcert
