#include "qkdcert/hermitian.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace qkdcert {

namespace {
constexpr double kHermitianTol = 1e-10;
constexpr double kDensityTol = 1e-10;
constexpr double kProjectorTol = 1e-9;
constexpr double kPovmTol = 1e-9;
constexpr double kPsdClamp = 1e-8;
}  // namespace

HermitianOperator::HermitianOperator(Eigen::MatrixXcd entries) {
  if (entries.rows() != entries.cols()) {
    throw std::invalid_argument("HermitianOperator: matrix must be square");
  }
  if (entries.rows() < 1 || entries.rows() > kMaxDim) {
    throw std::invalid_argument("HermitianOperator: dimension must be in [1, " +
                                std::to_string(kMaxDim) + "]");
  }
  if (!entries.allFinite()) {
    throw std::invalid_argument("HermitianOperator: entries must be finite");
  }
  const double asym = (entries - entries.adjoint()).cwiseAbs().maxCoeff();
  if (!(asym <= kHermitianTol)) {
    throw std::invalid_argument(
        "HermitianOperator: not Hermitian (max deviation " +
        std::to_string(asym) + ")");
  }
  entries_ = 0.5 * (entries + entries.adjoint());
}

HermitianOperator HermitianOperator::identity(Eigen::Index dim) {
  return HermitianOperator(Eigen::MatrixXcd::Identity(dim, dim));
}

Eigensystem hermitian_eigensystem(const HermitianOperator& a) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(a.matrix());
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("hermitian_eigensystem: failed to converge");
  }
  Eigensystem sys{solver.eigenvalues(), solver.eigenvectors()};
  // Fix each eigenvector's global phase: largest-magnitude component (first
  // index on ties) becomes real and positive.
  for (Eigen::Index j = 0; j < sys.vectors.cols(); ++j) {
    Eigen::Index pivot = 0;
    double best = -1.0;
    for (Eigen::Index i = 0; i < sys.vectors.rows(); ++i) {
      const double mag = std::abs(sys.vectors(i, j));
      if (mag > best) {
        best = mag;
        pivot = i;
      }
    }
    const std::complex<double> lead = sys.vectors(pivot, j);
    if (std::abs(lead) > 0.0) {
      sys.vectors.col(j) *= std::conj(lead) / std::abs(lead);
    }
  }
  return sys;
}

HermitianOperator psd_sqrt(const HermitianOperator& a) {
  Eigensystem sys = hermitian_eigensystem(a);
  Eigen::VectorXcd roots(sys.values.size());
  for (Eigen::Index i = 0; i < sys.values.size(); ++i) {
    if (sys.values[i] < -kPsdClamp) {
      throw std::invalid_argument("psd_sqrt: negative eigenvalue " +
                                  std::to_string(sys.values[i]));
    }
    roots[i] = std::sqrt(std::max(0.0, sys.values[i]));
  }
  Eigen::MatrixXcd b =
      sys.vectors * roots.asDiagonal() * sys.vectors.adjoint();
  return HermitianOperator(std::move(b));
}

void require_density(const HermitianOperator& rho, const char* name) {
  if (std::abs(rho.trace() - 1.0) > kDensityTol) {
    throw std::invalid_argument(std::string(name) +
                                ": density operator must have unit trace");
  }
  const Eigensystem sys = hermitian_eigensystem(rho);
  if (sys.values.minCoeff() < -kDensityTol) {
    throw std::invalid_argument(
        std::string(name) + ": density operator must be positive semidefinite");
  }
}

void require_projector(const HermitianOperator& p, const char* name) {
  const Eigen::MatrixXcd& m = p.matrix();
  const double dev = (m * m - m).cwiseAbs().maxCoeff();
  if (!(dev <= kProjectorTol)) {
    throw std::invalid_argument(std::string(name) +
                                ": not a projector (|P^2 - P| = " +
                                std::to_string(dev) + ")");
  }
}

void require_povm_element(const HermitianOperator& e, const char* name) {
  const Eigensystem sys = hermitian_eigensystem(e);
  if (sys.values.minCoeff() < -kPovmTol ||
      sys.values.maxCoeff() > 1.0 + kPovmTol) {
    throw std::invalid_argument(
        std::string(name) + ": invalid POVM element (eigenvalues outside [0, 1])");
  }
}

}  // namespace qkdcert
