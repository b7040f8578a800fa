#include "bellgate/linalg.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace bellgate {

namespace {

template <typename Mat>
Mat expm_spectral(const Mat& hm, double scale) {
  const double asym = hermitian_asymmetry(hm);
  if (asym > tol::kStructural) {
    std::ostringstream msg;
    msg << "expm_hermitian: input is not Hermitian (asymmetry " << asym << ")";
    throw std::domain_error(msg.str());
  }
  if (!all_finite(hm) || !std::isfinite(scale)) {
    throw std::domain_error("expm_hermitian: non-finite input");
  }
  // Symmetrize so the solver sees an exactly Hermitian matrix.
  const Mat herm = (hm + hm.adjoint()) * 0.5;
  Eigen::SelfAdjointEigenSolver<Mat> solver(herm);
  if (solver.info() != Eigen::Success) {
    throw std::domain_error("expm_hermitian: eigen decomposition failed");
  }
  const auto& evals = solver.eigenvalues();
  const auto& evecs = solver.eigenvectors();
  using Vec = Eigen::Matrix<Complex, Mat::RowsAtCompileTime, 1>;
  Vec phases;
  for (Eigen::Index k = 0; k < evals.size(); ++k) {
    phases(k) = std::exp(Complex(0.0, -scale * evals(k)));
  }
  return evecs * phases.asDiagonal() * evecs.adjoint();
}

template <typename Mat>
double dist_phase_invariant_impl(const Mat& a, const Mat& b) {
  constexpr double kUnitaryGate = 1e-9;
  if (dist_unitary(a) > kUnitaryGate || dist_unitary(b) > kUnitaryGate) {
    throw std::domain_error("dist_phase_invariant: inputs must be unitary");
  }
  const double n = static_cast<double>(a.rows());
  const double d = 1.0 - std::abs((a.adjoint() * b).trace()) / n;
  return d < 0.0 ? 0.0 : d;
}

}  // namespace

CMat2 pauli(int k) {
  CMat2 m;
  switch (k) {
    case 1:
      m << 0.0, 1.0, 1.0, 0.0;
      return m;
    case 2:
      m << 0.0, -kI, kI, 0.0;
      return m;
    case 3:
      m << 1.0, 0.0, 0.0, -1.0;
      return m;
    default:
      throw std::invalid_argument("pauli: index must be 1, 2 or 3");
  }
}

CMat4 kron(const CMat2& a, const CMat2& b) {
  CMat4 out;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
    }
  }
  return out;
}

CMat2 expm_hermitian(const CMat2& hm, double scale) { return expm_spectral(hm, scale); }
CMat4 expm_hermitian(const CMat4& hm, double scale) { return expm_spectral(hm, scale); }

double hermitian_asymmetry(const Eigen::Ref<const Eigen::MatrixXcd>& hm) {
  return (hm - hm.adjoint()).cwiseAbs().maxCoeff();
}

double dist_unitary(const Eigen::Ref<const Eigen::MatrixXcd>& u) {
  const Eigen::MatrixXcd gram = u.adjoint() * u;
  return (gram - Eigen::MatrixXcd::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
}

double dist_phase_invariant(const CMat4& a, const CMat4& b) { return dist_phase_invariant_impl(a, b); }
double dist_phase_invariant(const CMat2& a, const CMat2& b) { return dist_phase_invariant_impl(a, b); }

bool all_finite(const Eigen::Ref<const Eigen::MatrixXcd>& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) return false;
    }
  }
  return true;
}

}  // namespace bellgate
