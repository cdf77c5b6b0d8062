#include "qkdcert/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace qkdcert {

namespace {
constexpr double kRangeSlack = 1e-12;
}

Probability::Probability(double value) {
  // The negated comparison also rejects NaN.
  if (!(value >= -kRangeSlack && value <= 1.0 + kRangeSlack)) {
    throw std::invalid_argument("probability out of range: " +
                                std::to_string(value));
  }
  value_ = std::clamp(value, 0.0, 1.0);
}

double binary_entropy(double p) {
  if (!(p >= -kRangeSlack && p <= 1.0 + kRangeSlack)) {
    throw std::invalid_argument("binary_entropy: argument outside [0, 1]: " +
                                std::to_string(p));
  }
  p = std::clamp(p, 0.0, 1.0);
  if (p == 0.0 || p == 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

double bisect_decreasing(const std::function<double(double)>& f, double lo,
                         double hi, double tol) {
  if (!(lo < hi)) {
    throw std::invalid_argument("bisect_decreasing: requires lo < hi");
  }
  if (!(tol > 0.0)) {
    throw std::invalid_argument("bisect_decreasing: requires tol > 0");
  }
  if (!(f(lo) >= 0.0 && f(hi) <= 0.0)) {
    throw std::invalid_argument(
        "bisect_decreasing: no bracket (requires f(lo) >= 0 >= f(hi))");
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // interval below double resolution
    if (f(mid) >= 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace qkdcert
