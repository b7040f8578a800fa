#include "bellgate/bell_frame.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace bellgate {

namespace {

constexpr std::array<std::string_view, 4> kLabelNames{"b00", "b01", "b10", "b11"};

int sign_pow(int exponent) { return (exponent % 2 == 0) ? 1 : -1; }

void check_label(int label) {
  if (label < 0 || label > 3) throw std::invalid_argument("Bell label must be in 0..3");
}

BellFrame build_frame(int h) {
  // Generic couplings; any draw without accidental cancellations works.
  std::mt19937_64 rng(0x5eed0000u + static_cast<unsigned>(h));
  std::uniform_real_distribution<double> dist(0.5, 1.5);
  PhysicalParams p;
  p.h = h;
  p.t = 1.0;
  p.j = {dist(rng), -dist(rng), dist(rng)};
  p.b1 = dist(rng);
  p.b2 = -0.5 * dist(rng);

  const CMat4 q = bell_basis_matrix();
  const CMat4 hb = q.adjoint() * build_hamiltonian(p) * q;

  // Connected components of the off-diagonal coupling graph.
  std::array<int, 4> component{-1, -1, -1, -1};
  int n_components = 0;
  for (int start = 0; start < 4; ++start) {
    if (component[start] >= 0) continue;
    std::array<int, 4> stack{};
    int top = 0;
    stack[top++] = start;
    component[start] = n_components;
    while (top > 0) {
      const int a = stack[--top];
      for (int b = 0; b < 4; ++b) {
        if (b != a && component[b] < 0 && std::abs(hb(a, b)) > 1e-9) {
          component[b] = n_components;
          stack[top++] = b;
        }
      }
    }
    ++n_components;
  }

  BellFrame frame;
  frame.h = h;
  if (n_components != 2) {
    throw std::logic_error("bell_frame: coupling graph for h=" + std::to_string(h) + " has " +
                           std::to_string(n_components) + " components, expected 2");
  }
  std::array<int, 2> fill{0, 0};
  const int first = component[0];
  for (int label = 0; label < 4; ++label) {
    const int block = component[label] == first ? 0 : 1;
    if (fill[block] == 2) {
      throw std::logic_error("bell_frame: coupling graph is not two disjoint pairs");
    }
    frame.pairing[block][fill[block]++] = label;
  }
  if (fill[0] != 2 || fill[1] != 2) {
    throw std::logic_error("bell_frame: coupling graph is not two disjoint pairs");
  }

  for (int pos = 0; pos < 4; ++pos) frame.change_of_basis.col(pos) = bell_state(frame.label_at(pos));

  for (int j = 1; j <= 2; ++j) {
    BlockSigns& s = frame.signs[j - 1];
    s.k_row = 2 * j - 1;
    s.l_row = 2 * j;
    s.alpha = sign_pow(h + j + 1);
    s.beta = sign_pow(j * (h + s.l_row - s.k_row + 1));
    s.q = s.beta * sign_pow(h + 1);
  }
  return frame;
}

}  // namespace

std::string_view bell_label_name(int label) {
  check_label(label);
  return kLabelNames[static_cast<std::size_t>(label)];
}

int bell_label_from_name(std::string_view name) {
  for (int i = 0; i < 4; ++i) {
    if (kLabelNames[static_cast<std::size_t>(i)] == name) return i;
  }
  throw std::invalid_argument("unknown Bell label '" + std::string(name) + "'");
}

CVec4 bell_state(int label) {
  check_label(label);
  const int i = label / 2;
  const int j = label % 2;
  const double r = 1.0 / std::sqrt(2.0);
  CVec4 v = CVec4::Zero();
  v(j) += r;                                    // |0, j>
  v(2 + (1 - j)) += (i == 0 ? r : -r);          // (-1)^i |1, 1^j>
  return v;
}

CMat4 bell_basis_matrix() {
  CMat4 q;
  for (int label = 0; label < 4; ++label) q.col(label) = bell_state(label);
  return q;
}

CMat4 from_bell_labels(const CMat4& m) {
  const CMat4 q = bell_basis_matrix();
  return q * m * q.adjoint();
}

int BellFrame::position_of(int label) const {
  for (int pos = 0; pos < 4; ++pos) {
    if (label_at(pos) == label) return pos;
  }
  throw std::invalid_argument("label not present in frame");
}

CMat4 BellFrame::label_to_frame(const CMat4& m) const {
  CMat4 out;
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) out(r, c) = m(label_at(r), label_at(c));
  }
  return out;
}

const BellFrame& bell_frame(int h) {
  if (h < 1 || h > 3) throw std::invalid_argument("bell_frame: h must be 1, 2 or 3");
  static const std::array<BellFrame, 3> frames{build_frame(1), build_frame(2), build_frame(3)};
  return frames[static_cast<std::size_t>(h - 1)];
}

std::array<int, 2> transverse_axis(int h) {
  switch (h) {
    case 1:
      return {1, 0};
    case 2:
      return {0, -1};
    case 3:
      return {-1, 0};
    default:
      throw std::invalid_argument("transverse_axis: h must be 1, 2 or 3");
  }
}

BlockDecomposition to_blocks(const CMat4& u, const BellFrame& frame) {
  const CMat4 m = frame.change_of_basis.adjoint() * u * frame.change_of_basis;
  BlockDecomposition out;
  out.blocks[0] = m.block<2, 2>(0, 0);
  out.blocks[1] = m.block<2, 2>(2, 2);
  out.offblock_norm = std::sqrt(m.block<2, 2>(0, 2).squaredNorm() + m.block<2, 2>(2, 0).squaredNorm());
  return out;
}

std::array<BlockCoefficients, 2> block_coefficients(const PhysicalParams& p, const BellFrame& frame) {
  if (p.h != frame.h) throw std::invalid_argument("block_coefficients: frame direction does not match params");
  const CMat4 hf = frame.change_of_basis.adjoint() * build_hamiltonian(p) * frame.change_of_basis;
  std::array<BlockCoefficients, 2> out;
  for (int k = 0; k < 2; ++k) {
    const CMat2 r = hf.block<2, 2>(2 * k, 2 * k);
    BlockCoefficients& c = out[static_cast<std::size_t>(k)];
    c.c0 = 0.5 * (r(0, 0).real() + r(1, 1).real());
    c.cz = 0.5 * (r(0, 0).real() - r(1, 1).real());
    c.cx = r(0, 1).real();
    c.cy = -r(0, 1).imag();
  }
  return out;
}

std::array<ReducedBlockParams, 2> reduced_params(const PhysicalParams& p, const BellFrame& frame) {
  if (p.h != frame.h) throw std::invalid_argument("reduced_params: frame direction does not match params");
  const auto coeffs = block_coefficients(p, frame);
  const auto axis = transverse_axis(frame.h);
  const double scale = 1.0 + p.as_vector().tail<5>().cwiseAbs().maxCoeff();

  std::array<ReducedBlockParams, 2> out;
  for (int k = 0; k < 2; ++k) {
    const BlockCoefficients& c = coeffs[static_cast<std::size_t>(k)];
    const BlockSigns& s = frame.signs[static_cast<std::size_t>(k)];
    ReducedBlockParams& rp = out[static_cast<std::size_t>(k)];
    rp.block_index = k + 1;
    rp.delta_plus = -c.c0 * p.t;
    const double radius = std::sqrt(c.cx * c.cx + c.cy * c.cy + c.cz * c.cz);
    if (radius <= 1e-15 * scale) {
      rp.delta_minus = 0.0;
      rp.b_red = 0.0;
      rp.j_red = 1.0;
      continue;
    }
    const double along = (axis[0] * c.cx + axis[1] * c.cy) / radius;
    const double across = axis[1] * c.cx - axis[0] * c.cy;
    if (std::abs(across) > 1e-12 * scale) {
      throw std::logic_error("reduced_params: field couples the block off its transverse axis");
    }
    rp.delta_minus = radius * p.t;
    rp.b_red = s.q * along;
    rp.j_red = s.beta * c.cz / radius;
  }
  return out;
}

Eigen::Vector3d block_axis(const ReducedBlockParams& rp, const BellFrame& frame) {
  if (rp.block_index < 1 || rp.block_index > 2) throw std::invalid_argument("block_index must be 1 or 2");
  const BlockSigns& s = frame.signs[static_cast<std::size_t>(rp.block_index - 1)];
  const auto axis = transverse_axis(frame.h);
  return {s.q * rp.b_red * axis[0], s.q * rp.b_red * axis[1], s.beta * rp.j_red};
}

CMat2 closed_form_block(const ReducedBlockParams& rp, const BellFrame& frame) {
  const Eigen::Vector3d n = block_axis(rp, frame);
  if (std::abs(n.norm() - 1.0) > tol::kClosedForm) {
    throw std::domain_error("closed_form_block: |n| must be 1 (b^2 + j^2 = 1)");
  }
  const CMat2 ns = n(0) * pauli(1) + n(1) * pauli(2) + n(2) * pauli(3);
  const CMat2 su2 = std::cos(rp.delta_minus) * CMat2::Identity() - kI * std::sin(rp.delta_minus) * ns;
  return std::exp(kI * rp.delta_plus) * su2;
}

BlockPauliBasis block_pauli_basis(const BellFrame& frame, int j) {
  if (j < 1 || j > 2) throw std::invalid_argument("block_pauli_basis: j must be 1 or 2");
  const Eigen::Matrix<Complex, 4, 2> embed = frame.change_of_basis.middleCols<2>(2 * (j - 1));
  BlockPauliBasis basis;
  basis.block_index = j;
  basis.identity = embed * embed.adjoint();
  for (int a = 1; a <= 3; ++a) basis.s[static_cast<std::size_t>(a - 1)] = embed * pauli(a) * embed.adjoint();
  return basis;
}

}  // namespace bellgate
