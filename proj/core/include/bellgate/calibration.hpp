#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bellgate/bell_frame.hpp"
#include "bellgate/gates.hpp"
#include "bellgate/model.hpp"

namespace bellgate {

/// Constraints on one block of the prescription. Block 1 is the alpha block.
struct BlockTarget {
  std::optional<double> delta_minus;
  std::optional<double> b;
  std::optional<double> j;
  /// b = relation * q * beta * j (equal transversal and longitudinal weight).
  std::optional<int> b_relation;
  /// |b| -> 1 is only approached asymptotically.
  bool b_unit_limit = false;

  friend bool operator==(const BlockTarget&, const BlockTarget&) = default;
};

/// Reduced-parameter prescription for one Bell-label gate.
struct PrescriptionTargets {
  GateId gate;
  int h = 1;
  std::optional<double> delta_plus_1;
  std::array<BlockTarget, 2> blocks;
  int m = 0;
  int m_prime = 0;
  /// (S_phi (x) 1) realized on the h = 3 frame instead of h = 1.
  bool alternative_route = false;

  /// Number of residual entries a solved card carries.
  int active_constraints() const;

  friend bool operator==(const PrescriptionTargets&, const PrescriptionTargets&) = default;
};

/// Table of prescriptions. m and m_prime are the CNOT winding numbers and are
/// ignored for other gates. Throws std::invalid_argument for the translator,
/// computational-set tags, or negative windings.
PrescriptionTargets prescription_targets(const GateId& g, int m = 1, int m_prime = 0,
                                         bool alternative_route = false);

/// Concrete sign / winding choice the solver settled on.
struct Branch {
  double delta_plus = 0.0;
  std::array<double, 2> delta_minus{0.0, 0.0};
  std::array<int, 2> signs{1, 1};
  std::array<int, 2> windings{0, 0};

  friend bool operator==(const Branch&, const Branch&) = default;
};

struct FamilyInfo {
  double field_scale = 0.0;
  double kappa = 0.0;
  double b_alpha = 0.0;

  friend bool operator==(const FamilyInfo&, const FamilyInfo&) = default;
};

struct PrescriptionCard {
  PrescriptionTargets targets;
  Branch branch;
  PhysicalParams solved;
  /// Phase-invariant distance between evolve(solved) and the target gate.
  double realized_error = 0.0;
  /// Reduced-parameter residuals, one per active constraint.
  std::vector<double> residuals;
  std::optional<FamilyInfo> family;

  friend bool operator==(const PrescriptionCard&, const PrescriptionCard&) = default;
};

struct SolverOptions {
  int starts = 64;
  double newton_tol = 1e-12;
  int max_iterations = 200;
  std::uint64_t seed = kDefaultSeed;
  /// Euclidean norm of (J1, J2, J3, B1, B2); fixes the time/energy gauge.
  double energy_scale = 1.0;
  /// Extra 2 pi windings explored on each free Rabi phase.
  int extra_windings = 1;
  double accept_tol = tol::kSynthesis;

  static constexpr std::uint64_t kDefaultSeed = 20180917;
};

/// Target unitary of a Bell-label gate in computational coordinates.
CMat4 target_unitary(const GateId& g);

/// Reduced-parameter residuals of params against a branch of the targets.
std::vector<double> prescription_residuals(const PrescriptionTargets& tg, const Branch& branch,
                                           const PhysicalParams& p);

/// Multi-start damped Gauss-Newton on the reduced-parameter residual map.
/// Returns the minimal-t solution that realizes the gate within accept_tol.
/// Throws SolverError when nothing converges, InfeasibleError when converged
/// solutions never realize the gate.
PrescriptionCard solve_physical(const PrescriptionTargets& tg, const SolverOptions& opts = {});

/// Finite-m member of the CNOT family. The alpha block keeps a fixed residual
/// exchange kappa against a field field_scale * m * kappa, so |b_alpha| -> 1
/// as m * field_scale grows; t follows the field-dominated winding 2 m pi.
PrescriptionCard cnot_family(const GateId& g, int m, double field_scale, double kappa = 1.0);

/// One CSV row per family member.
std::string family_csv(const std::vector<PrescriptionCard>& cards);

}  // namespace bellgate
