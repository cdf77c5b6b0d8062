#include "qkdcert/characterization.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace qkdcert {

namespace {
constexpr double kRangeSlack = 1e-12;

double checked_unit_interval(double v, const char* what) {
  if (!(v >= -kRangeSlack && v <= 1.0 + kRangeSlack)) {
    throw std::invalid_argument(std::string(what) + " out of range: " +
                                std::to_string(v));
  }
  return std::clamp(v, 0.0, 1.0);
}
}  // namespace

ImperfectionParams::ImperfectionParams(double delta_, double eta_z_,
                                       double epsilon_z_) {
  if (!(delta_ >= -kRangeSlack && delta_ <= 0.5 + kRangeSlack)) {
    throw std::invalid_argument("delta out of range [0, 1/2]: " +
                                std::to_string(delta_));
  }
  delta = std::clamp(delta_, 0.0, 0.5);
  eta_z = checked_unit_interval(eta_z_, "eta_z");
  epsilon_z = checked_unit_interval(epsilon_z_, "epsilon_z");
}

double fidelity(const HermitianOperator& rho, const HermitianOperator& sigma) {
  if (rho.dim() != sigma.dim()) {
    throw std::invalid_argument("fidelity: dimension mismatch");
  }
  require_density(rho, "fidelity: rho");
  require_density(sigma, "fidelity: sigma");
  const HermitianOperator root = psd_sqrt(rho);
  Eigen::MatrixXcd inner = root.matrix() * sigma.matrix() * root.matrix();
  const Eigensystem sys = hermitian_eigensystem(HermitianOperator(std::move(inner)));
  double f = 0.0;
  for (Eigen::Index i = 0; i < sys.values.size(); ++i) {
    f += std::sqrt(std::max(0.0, sys.values[i]));
  }
  return std::clamp(f, 0.0, 1.0);
}

double basis_dependence(const HermitianOperator& rho_z,
                        const HermitianOperator& rho_x) {
  return 0.5 * (1.0 - fidelity(rho_z, rho_x));
}

double trace_distance(const HermitianOperator& rho,
                      const HermitianOperator& sigma) {
  if (rho.dim() != sigma.dim()) {
    throw std::invalid_argument("trace_distance: dimension mismatch");
  }
  const HermitianOperator diff(rho.matrix() - sigma.matrix());
  const Eigensystem sys = hermitian_eigensystem(diff);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < sys.values.size(); ++i) {
    sum += std::abs(sys.values[i]);
  }
  return std::clamp(0.5 * sum, 0.0, 1.0);
}

double blinding_parameter(const HermitianOperator& povm_element,
                          const HermitianOperator& projector) {
  if (povm_element.dim() != projector.dim()) {
    throw std::invalid_argument("blinding_parameter: dimension mismatch");
  }
  require_povm_element(povm_element, "blinding_parameter: E");
  require_projector(projector, "blinding_parameter: Q");

  const Eigensystem qsys = hermitian_eigensystem(projector);
  std::vector<Eigen::Index> support;
  for (Eigen::Index i = 0; i < qsys.values.size(); ++i) {
    if (qsys.values[i] > 0.5) support.push_back(i);
  }
  if (support.empty()) {
    throw std::invalid_argument("blinding_parameter: empty subspace (Q = 0)");
  }
  Eigen::MatrixXcd basis(projector.dim(),
                         static_cast<Eigen::Index>(support.size()));
  for (std::size_t j = 0; j < support.size(); ++j) {
    basis.col(static_cast<Eigen::Index>(j)) = qsys.vectors.col(support[j]);
  }
  Eigen::MatrixXcd compressed = basis.adjoint() * povm_element.matrix() * basis;
  const Eigensystem csys =
      hermitian_eigensystem(HermitianOperator(std::move(compressed)));
  return std::clamp(csys.values[0], 0.0, 1.0);
}

CommonLossSplit factor_common_loss(Probability eta0, Probability eta1) {
  const double common = std::max(eta0.value(), eta1.value());
  if (common == 0.0) {
    throw std::invalid_argument(
        "factor_common_loss: fully blinded detectors (both efficiencies zero)");
  }
  return {common, std::min(eta0.value(), eta1.value()) / common};
}

}  // namespace qkdcert
