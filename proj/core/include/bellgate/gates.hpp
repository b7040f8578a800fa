#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "bellgate/linalg.hpp"

namespace bellgate {

enum class GateTag {
  // Bell-label gates.
  kSPhiQ2,
  kSPhiQ1,
  kHQ2,
  kHQ1,
  kCnot12,
  kCnot21,
  kTranslator,
  // Computational-basis universal set.
  kBS8,
  kBS4,
  kBH,
  kBCnot12,
  kBCnot21,
  // Conjugated matrix with no named equivalent (compile output only).
  kOpaque,
};

std::string_view gate_tag_name(GateTag tag);
GateTag gate_tag_from_name(std::string_view name);

bool is_bell_tag(GateTag tag);
bool is_boykin_tag(GateTag tag);
bool is_phase_tag(GateTag tag);
bool is_cnot_tag(GateTag tag);
/// One-level gates of the computational set (need a target qubit).
bool is_single_qubit_boykin(GateTag tag);

struct GateId {
  GateTag tag = GateTag::kHQ1;
  /// Phase angle for S_phi gates; pi/8 and pi/4 for B_S8 and B_S4.
  std::optional<double> phi;
  /// Target qubit (1 or 2) for one-level computational gates.
  std::optional<int> qubit;

  /// Fills the implied phi of B_S8 / B_S4 and checks the tag-specific fields.
  /// Throws std::invalid_argument on violations.
  static GateId make(GateTag tag, std::optional<double> phi = std::nullopt,
                     std::optional<int> qubit = std::nullopt);

  friend bool operator==(const GateId&, const GateId&) = default;
};

enum class Basis { kComputational, kBell };

std::string_view basis_name(Basis b);
Basis basis_from_name(std::string_view name);

struct CircuitOp {
  GateId gate;
  /// Set only for kOpaque.
  std::optional<CMat4> matrix;
};

struct Circuit {
  Basis basis = Basis::kComputational;
  std::vector<CircuitOp> ops;
};

/// Symmetrized phase gate diag(e^{-i phi}, e^{i phi}).
CMat2 phase_gate(double phi);
CMat2 hadamard();

/// Matrix of a computational-set gate: 2x2 for one-level gates, 4x4 for CNOTs.
/// Throws std::invalid_argument for Bell-label tags.
Eigen::MatrixXcd boykin_gate(const GateId& g);

/// 4x4 embedding g (x) 1 or 1 (x) g; CNOTs unchanged.
CMat4 boykin_embedded(const GateId& g);

/// Logical action on the Bell labels (i, j), in the order
/// (beta00, beta01, beta10, beta11). Throws std::invalid_argument for
/// computational-set tags.
CMat4 d_gate(const GateId& g);

/// (H (x) 1) on the Bell labels: self-adjoint, involutory, |beta_ij> -> |i, i^j>.
CMat4 translator();

/// Matrix of a single circuit op in the circuit's basis.
CMat4 op_matrix(const CircuitOp& op, Basis basis);

/// Product of the circuit with the leftmost op applied first. Empty -> I.
CMat4 matrix_of(const Circuit& c);

/// Rewrites a computational circuit as T, T g1 T, ..., T gN T, T over the Bell
/// labels, naming each conjugate that matches a Bell-label gate within 1e-10.
Circuit compile(const Circuit& c);

}  // namespace bellgate
