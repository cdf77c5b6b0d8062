#pragma once

#include <functional>

namespace qkdcert {

// A real value constrained to [0, 1]. Construction tolerates violations up to
// 1e-12 (the value is clamped); anything beyond that is rejected.
class Probability {
 public:
  Probability() = default;
  explicit Probability(double value);

  operator double() const noexcept { return value_; }
  double value() const noexcept { return value_; }

 private:
  double value_ = 0.0;
};

// Binary Shannon entropy h(p) = -p log2(p) - (1-p) log2(1-p), with
// h(0) = h(1) = 0 by continuity.
double binary_entropy(double p);

// Locates the sign change of a non-increasing function with
// f(lo) >= 0 >= f(hi). The result is within tol of the crossing.
// Throws std::invalid_argument ("no bracket") if the sign condition fails.
double bisect_decreasing(const std::function<double(double)>& f, double lo,
                         double hi, double tol);

}  // namespace qkdcert
