#pragma once

#include <array>
#include <string_view>

#include <Eigen/Core>

#include "bellgate/linalg.hpp"

namespace bellgate {

/// Coordinates of the control vector, in the order (t, J1, J2, J3, B1, B2).
enum class Param : int { kT = 0, kJ1, kJ2, kJ3, kB1, kB2 };
inline constexpr int kNumParams = 6;
using ParamVector = Eigen::Matrix<double, kNumParams, 1>;

std::string_view param_name(Param p);
std::string_view param_name(int index);
/// Inverse of param_name; throws std::invalid_argument for unknown names.
Param param_from_name(std::string_view name);

/// Control knobs of one evolution: H_h = sum_k J_k s_k s_k - B1 s_h(1) - B2 s_h(2),
/// applied for time t (hbar = 1).
struct PhysicalParams {
  double t = 0.0;
  std::array<double, 3> j{0.0, 0.0, 0.0};
  double b1 = 0.0;
  double b2 = 0.0;
  int h = 3;

  /// Throws std::invalid_argument if h is outside {1,2,3}, t < 0 or any value
  /// is non-finite.
  void validate() const;

  ParamVector as_vector() const;
  /// Rebuilds params from (t, J1, J2, J3, B1, B2) with direction h. No validation.
  static PhysicalParams from_vector(const ParamVector& v, int h);

  friend bool operator==(const PhysicalParams&, const PhysicalParams&) = default;
};

CMat4 build_hamiltonian(const PhysicalParams& p);

/// U = exp(-i H t) in the computational basis |00>, |01>, |10>, |11>.
CMat4 evolve(const PhysicalParams& p);

/// evolve() without the t >= 0 check, for finite differences around t.
CMat4 evolve_unchecked(const PhysicalParams& p);

}  // namespace bellgate
