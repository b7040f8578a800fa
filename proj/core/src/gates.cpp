#include "bellgate/gates.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

namespace bellgate {

namespace {

constexpr std::array<std::pair<GateTag, std::string_view>, 13> kTagNames{{
    {GateTag::kSPhiQ2, "S_phi_q2"},
    {GateTag::kSPhiQ1, "S_phi_q1"},
    {GateTag::kHQ2, "H_q2"},
    {GateTag::kHQ1, "H_q1"},
    {GateTag::kCnot12, "CNOT_12"},
    {GateTag::kCnot21, "CNOT_21"},
    {GateTag::kTranslator, "T_translator"},
    {GateTag::kBS8, "B_S8"},
    {GateTag::kBS4, "B_S4"},
    {GateTag::kBH, "B_H"},
    {GateTag::kBCnot12, "B_CNOT12"},
    {GateTag::kBCnot21, "B_CNOT21"},
    {GateTag::kOpaque, "opaque"},
}};

constexpr double kMatchTol = 1e-10;

// Permutation matrix sending basis index a to perm[a].
CMat4 permutation(const std::array<int, 4>& perm) {
  CMat4 m = CMat4::Zero();
  for (int a = 0; a < 4; ++a) m(perm[static_cast<std::size_t>(a)], a) = 1.0;
  return m;
}

// Index 2i + j: (i, j) -> (i, i^j) swaps 2 <-> 3; (i, j) -> (i^j, j) swaps 1 <-> 3.
CMat4 cnot_12() { return permutation({0, 1, 3, 2}); }
CMat4 cnot_21() { return permutation({0, 3, 2, 1}); }

}  // namespace

std::string_view gate_tag_name(GateTag tag) {
  for (const auto& [t, name] : kTagNames) {
    if (t == tag) return name;
  }
  throw std::invalid_argument("unknown gate tag");
}

GateTag gate_tag_from_name(std::string_view name) {
  for (const auto& [t, n] : kTagNames) {
    if (n == name) return t;
  }
  throw std::invalid_argument("unknown gate name '" + std::string(name) + "'");
}

bool is_bell_tag(GateTag tag) {
  switch (tag) {
    case GateTag::kSPhiQ2:
    case GateTag::kSPhiQ1:
    case GateTag::kHQ2:
    case GateTag::kHQ1:
    case GateTag::kCnot12:
    case GateTag::kCnot21:
    case GateTag::kTranslator:
      return true;
    default:
      return false;
  }
}

bool is_boykin_tag(GateTag tag) {
  switch (tag) {
    case GateTag::kBS8:
    case GateTag::kBS4:
    case GateTag::kBH:
    case GateTag::kBCnot12:
    case GateTag::kBCnot21:
      return true;
    default:
      return false;
  }
}

bool is_phase_tag(GateTag tag) {
  return tag == GateTag::kSPhiQ2 || tag == GateTag::kSPhiQ1 || tag == GateTag::kBS8 || tag == GateTag::kBS4;
}

bool is_cnot_tag(GateTag tag) { return tag == GateTag::kCnot12 || tag == GateTag::kCnot21; }

bool is_single_qubit_boykin(GateTag tag) {
  return tag == GateTag::kBS8 || tag == GateTag::kBS4 || tag == GateTag::kBH;
}

GateId GateId::make(GateTag tag, std::optional<double> phi, std::optional<int> qubit) {
  GateId g;
  g.tag = tag;
  if (tag == GateTag::kBS8 || tag == GateTag::kBS4) {
    const double implied = tag == GateTag::kBS8 ? std::numbers::pi / 8 : std::numbers::pi / 4;
    if (phi && std::abs(*phi - implied) > 1e-15) {
      throw std::invalid_argument(std::string(gate_tag_name(tag)) + " has a fixed phase");
    }
    phi = implied;
  }
  if (is_phase_tag(tag) != phi.has_value()) {
    throw std::invalid_argument(std::string(gate_tag_name(tag)) +
                                (phi ? " does not take a phase" : " requires a phase phi"));
  }
  if (phi && !std::isfinite(*phi)) throw std::invalid_argument("phi must be finite");
  if (qubit) {
    if (!is_single_qubit_boykin(tag)) {
      throw std::invalid_argument(std::string(gate_tag_name(tag)) + " does not take a target qubit");
    }
    if (*qubit != 1 && *qubit != 2) throw std::invalid_argument("target qubit must be 1 or 2");
  }
  g.phi = phi;
  g.qubit = qubit;
  return g;
}

std::string_view basis_name(Basis b) { return b == Basis::kComputational ? "computational" : "bell"; }

Basis basis_from_name(std::string_view name) {
  if (name == "computational") return Basis::kComputational;
  if (name == "bell") return Basis::kBell;
  throw std::invalid_argument("unknown basis '" + std::string(name) + "'");
}

CMat2 phase_gate(double phi) {
  CMat2 m = CMat2::Zero();
  m(0, 0) = std::exp(-kI * phi);
  m(1, 1) = std::exp(kI * phi);
  return m;
}

CMat2 hadamard() {
  CMat2 m;
  m << 1.0, 1.0, 1.0, -1.0;
  return m / std::sqrt(2.0);
}

Eigen::MatrixXcd boykin_gate(const GateId& g) {
  switch (g.tag) {
    case GateTag::kBS8:
      return phase_gate(std::numbers::pi / 8);
    case GateTag::kBS4:
      return phase_gate(std::numbers::pi / 4);
    case GateTag::kBH:
      return hadamard();
    case GateTag::kBCnot12:
      return cnot_12();
    case GateTag::kBCnot21:
      return cnot_21();
    default:
      throw std::invalid_argument("boykin_gate: " + std::string(gate_tag_name(g.tag)) +
                                  " is not in the computational universal set");
  }
}

CMat4 boykin_embedded(const GateId& g) {
  const Eigen::MatrixXcd m = boykin_gate(g);
  if (m.rows() == 4) return m;
  if (!g.qubit) {
    throw std::invalid_argument("one-level gate " + std::string(gate_tag_name(g.tag)) +
                                " needs a target qubit annotation");
  }
  const CMat2 single = m;
  return *g.qubit == 1 ? kron(single, CMat2::Identity()) : kron(CMat2::Identity(), single);
}

CMat4 d_gate(const GateId& g) {
  const CMat2 id = CMat2::Identity();
  switch (g.tag) {
    case GateTag::kSPhiQ2:
      return kron(id, phase_gate(g.phi.value()));
    case GateTag::kSPhiQ1:
      return kron(phase_gate(g.phi.value()), id);
    case GateTag::kHQ2:
      return kron(id, hadamard());
    case GateTag::kHQ1:
    case GateTag::kTranslator:
      return kron(hadamard(), id);
    case GateTag::kCnot12:
      return cnot_12();
    case GateTag::kCnot21:
      return cnot_21();
    default:
      throw std::invalid_argument("d_gate: " + std::string(gate_tag_name(g.tag)) +
                                  " is not a Bell-label gate");
  }
}

CMat4 translator() { return d_gate(GateId::make(GateTag::kTranslator)); }

CMat4 op_matrix(const CircuitOp& op, Basis basis) {
  if (op.gate.tag == GateTag::kOpaque) {
    if (!op.matrix) throw std::invalid_argument("opaque op without a matrix");
    return *op.matrix;
  }
  if (basis == Basis::kComputational) {
    if (!is_boykin_tag(op.gate.tag)) {
      throw std::invalid_argument("computational circuit contains Bell-label gate " +
                                  std::string(gate_tag_name(op.gate.tag)));
    }
    return boykin_embedded(op.gate);
  }
  if (!is_bell_tag(op.gate.tag)) {
    throw std::invalid_argument("Bell circuit contains computational gate " +
                                std::string(gate_tag_name(op.gate.tag)));
  }
  return d_gate(op.gate);
}

CMat4 matrix_of(const Circuit& c) {
  CMat4 total = CMat4::Identity();
  for (const CircuitOp& op : c.ops) total = op_matrix(op, c.basis) * total;
  return total;
}

Circuit compile(const Circuit& c) {
  if (c.basis != Basis::kComputational) throw std::invalid_argument("compile: input must be a computational circuit");
  const CMat4 tr = translator();
  Circuit out;
  out.basis = Basis::kBell;
  out.ops.push_back({GateId::make(GateTag::kTranslator), std::nullopt});
  for (const CircuitOp& op : c.ops) {
    if (op.gate.tag == GateTag::kOpaque) throw std::invalid_argument("compile: opaque ops cannot be compiled");
    const CMat4 conj = tr * op_matrix(op, c.basis) * tr;

    std::vector<GateId> candidates{GateId::make(GateTag::kHQ2), GateId::make(GateTag::kHQ1),
                                   GateId::make(GateTag::kCnot12), GateId::make(GateTag::kCnot21)};
    if (op.gate.phi) {
      candidates.push_back(GateId::make(GateTag::kSPhiQ2, *op.gate.phi));
      candidates.push_back(GateId::make(GateTag::kSPhiQ1, *op.gate.phi));
    }
    std::optional<GateId> named;
    for (const GateId& cand : candidates) {
      if (dist_phase_invariant(d_gate(cand), conj) <= kMatchTol) {
        named = cand;
        break;
      }
    }
    if (named) {
      out.ops.push_back({*named, std::nullopt});
    } else {
      out.ops.push_back({GateId::make(GateTag::kOpaque), conj});
    }
  }
  out.ops.push_back({GateId::make(GateTag::kTranslator), std::nullopt});
  return out;
}

}  // namespace bellgate
