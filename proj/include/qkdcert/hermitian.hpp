#pragma once

#include <Eigen/Dense>

namespace qkdcert {

// Small dense Hermitian matrix: density operators, POVM elements, projectors.
// Entries are checked against the conjugate transpose within 1e-10 and then
// symmetrized exactly. Dimensions are capped at 64.
class HermitianOperator {
 public:
  static constexpr Eigen::Index kMaxDim = 64;

  explicit HermitianOperator(Eigen::MatrixXcd entries);

  static HermitianOperator identity(Eigen::Index dim);

  Eigen::Index dim() const { return entries_.rows(); }
  const Eigen::MatrixXcd& matrix() const { return entries_; }
  double trace() const { return entries_.trace().real(); }

 private:
  Eigen::MatrixXcd entries_;
};

struct Eigensystem {
  Eigen::VectorXd values;    // ascending
  Eigen::MatrixXcd vectors;  // orthonormal columns, same order as values
};

// Deterministic eigendecomposition. Each eigenvector is phased so that its
// largest-magnitude component (first such index on ties) is real and positive.
Eigensystem hermitian_eigensystem(const HermitianOperator& a);

// Positive-semidefinite square root. Eigenvalues in [-1e-8, 0] are clamped to
// zero; anything more negative is rejected.
HermitianOperator psd_sqrt(const HermitianOperator& a);

// Validation shared by the characterization routines; each throws
// std::invalid_argument with `name` in the message.
void require_density(const HermitianOperator& rho, const char* name);
void require_projector(const HermitianOperator& p, const char* name);
void require_povm_element(const HermitianOperator& e, const char* name);

}  // namespace qkdcert
