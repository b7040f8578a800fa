#pragma once

#include <complex>

#include <Eigen/Core>

namespace bellgate {

using Complex = std::complex<double>;
using CMat2 = Eigen::Matrix2cd;
using CMat4 = Eigen::Matrix4cd;
using CVec2 = Eigen::Vector2cd;
using CVec4 = Eigen::Vector4cd;

inline constexpr Complex kI{0.0, 1.0};

// Project-wide tolerance ladder.
namespace tol {
inline constexpr double kStructural = 1e-12;
inline constexpr double kClosedForm = 1e-9;
inline constexpr double kSynthesis = 1e-8;
}  // namespace tol

/// Pauli matrix sigma_k for k = 1 (x), 2 (y), 3 (z).
CMat2 pauli(int k);

/// Kronecker product with |q1 q2> at index 2*q1 + q2.
CMat4 kron(const CMat2& a, const CMat2& b);

/// exp(-i * scale * hm) via the real spectrum of the Hermitian input.
/// Throws std::domain_error when max|hm - hm^dagger| exceeds 1e-12.
CMat2 expm_hermitian(const CMat2& hm, double scale);
CMat4 expm_hermitian(const CMat4& hm, double scale);

/// Largest entrywise |hm - hm^dagger|.
double hermitian_asymmetry(const Eigen::Ref<const Eigen::MatrixXcd>& hm);

/// max entrywise |u^dagger u - I|.
double dist_unitary(const Eigen::Ref<const Eigen::MatrixXcd>& u);

/// 1 - |tr(a^dagger b)| / 4. Zero iff a and b differ by a global phase.
/// Throws std::domain_error if either input fails unitarity at 1e-9.
double dist_phase_invariant(const CMat4& a, const CMat4& b);

/// Same measure for 2x2 blocks (normalized by 2).
double dist_phase_invariant(const CMat2& a, const CMat2& b);

/// True when every entry is finite.
bool all_finite(const Eigen::Ref<const Eigen::MatrixXcd>& m);

}  // namespace bellgate
