#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "bellgate/bell_frame.hpp"
#include "bellgate/calibration.hpp"
#include "bellgate/model.hpp"

namespace bellgate {

/// Initial state as amplitudes over the frame's Bell arrangement:
/// amplitudes[2k + j] multiplies the j-th Bell state of block k.
struct BlockState {
  std::array<Complex, 4> amplitudes{};
  int h = 1;

  /// Checks the frame direction and unit norm at 1e-12.
  static BlockState make(const std::array<Complex, 4>& amplitudes, int h);
  /// Rescales to unit norm first.
  static BlockState normalized(const std::array<Complex, 4>& amplitudes, int h);

  const BellFrame& frame() const { return bell_frame(h); }
  CVec4 frame_vector() const;
  /// Same state in computational coordinates.
  CVec4 computational() const;
};

/// Deterministic Halton-based sampling of the unit sphere in C^4.
std::vector<BlockState> sample_states(int h, int count, std::uint64_t seed);

/// Perturbation of (t, J1, J2, J3, B1, B2).
struct Perturbation {
  ParamVector dp = ParamVector::Zero();
};

/// D s and D^2 s per block with D = dp . grad_p.
struct BlockDerivatives {
  std::array<CMat2, 2> first;
  std::array<CMat2, 2> second;
};

/// Central differences of the extracted block map along dp / |dp| with one
/// Richardson refinement. Throws NumericalError on non-finite evaluations.
BlockDerivatives directional_derivatives(const PhysicalParams& p, const Perturbation& dp, const BellFrame& frame);

/// |<U(p) psi0 | U(p + dp) psi0>|^2 from two full evolutions.
double fidelity_exact(const BlockState& state, const PhysicalParams& p, const Perturbation& dp);

/// The two readings of the second-order expansion.
enum class ExpansionVariant {
  /// 1 - a + |b|^2 with a = <Ds^dag Ds>, b = <s^dag Ds>.
  kBilinear,
  /// 1 + 2 Re b + |b|^2 + Re <s^dag D^2 s>.
  kDirect,
};

struct ExpansionTerms {
  double a = 0.0;
  Complex b{0.0, 0.0};
  /// <s^dag D^2 s>, summed over blocks with the state amplitudes.
  Complex second{0.0, 0.0};
};

ExpansionTerms expansion_terms(const BlockState& state, const PhysicalParams& p, const Perturbation& dp);

double fidelity_second_order(const BlockState& state, const PhysicalParams& p, const Perturbation& dp,
                             ExpansionVariant variant = ExpansionVariant::kBilinear);

/// Gradient of the quadratic infidelity model 1 - F^2 with respect to dp,
/// evaluated at dp.
ParamVector infidelity_gradient(const BlockState& state, const PhysicalParams& p, const Perturbation& dp);

struct FidelityReport {
  GateId gate;
  PrescriptionCard card;
  int state_id = 0;
  int param = -1;
  Perturbation dp;
  double f2_second_order = 1.0;
  double f2_exact = 1.0;
  ParamVector per_parameter_gradient = ParamVector::Zero();
  double cubic_residual = 0.0;
};

FidelityReport fidelity_report(const PrescriptionCard& card, const BlockState& state, const Perturbation& dp,
                               int state_id = 0);

/// Per-parameter step lists, indexed like ParamVector.
using SweepGrid = std::array<std::vector<double>, kNumParams>;

struct SweepResult {
  std::vector<FidelityReport> reports;
  /// (parameter index, mean (1 - F^2_exact) / step^2), most sensitive first.
  std::vector<std::pair<int, double>> ranking;
};

/// Coordinate perturbations of the card's solution for every state and step.
/// Throws std::invalid_argument for an empty grid or state list.
SweepResult sensitivity_sweep(const PrescriptionCard& card, const std::vector<BlockState>& states,
                              const SweepGrid& grid);

}  // namespace bellgate
