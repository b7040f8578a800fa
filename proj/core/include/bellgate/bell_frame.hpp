#pragma once

#include <array>
#include <string_view>

#include "bellgate/linalg.hpp"
#include "bellgate/model.hpp"

namespace bellgate {

/// Bell state |beta_ij> = (|0,j> + (-1)^i |1,1^j>) / sqrt(2); index = 2i + j.
enum class BellLabel : int { kB00 = 0, kB01 = 1, kB10 = 2, kB11 = 3 };

std::string_view bell_label_name(int label);
int bell_label_from_name(std::string_view name);

/// Column vector of the Bell state in computational coordinates.
CVec4 bell_state(int label);

/// Change of basis whose columns are the Bell states in label order
/// (beta00, beta01, beta10, beta11).
CMat4 bell_basis_matrix();

/// Operator in computational coordinates whose matrix on the Bell labels is m.
CMat4 from_bell_labels(const CMat4& m);

/// Sign bookkeeping for one block. Rows k, l are the 1-based positions of the
/// block's two rows in the frame-ordered 4x4 matrix.
struct BlockSigns {
  int alpha = 1;
  int beta = 1;
  int q = 1;
  int k_row = 1;
  int l_row = 2;
};

/// Direction-dependent ordering of the Bell states into two coupled pairs.
struct BellFrame {
  int h = 3;
  /// Columns are the Bell states in frame order: block 1 then block 2.
  CMat4 change_of_basis;
  /// pairing[block][pos] is a Bell label index.
  std::array<std::array<int, 2>, 2> pairing{};
  std::array<BlockSigns, 2> signs{};

  /// Bell label sitting at frame position 0..3.
  int label_at(int position) const { return pairing[position / 2][position % 2]; }
  int position_of(int label) const;
  /// Reorders a Bell-label-basis matrix into the frame order.
  CMat4 label_to_frame(const CMat4& m) const;
};

/// The frame for field direction h. Pairing is discovered from the coupling
/// pattern of H_h in the Bell basis; block 1 holds beta00.
/// Throws std::logic_error if the coupling graph is not two disjoint pairs.
const BellFrame& bell_frame(int h);

/// Unit vector in the (x, y) plane along which the field couples the pair:
/// (sin(h pi/2), cos(h pi/2)).
std::array<int, 2> transverse_axis(int h);

struct BlockDecomposition {
  std::array<CMat2, 2> blocks;
  /// Frobenius norm of the off-block part of frame^dagger u frame.
  double offblock_norm = 0.0;
};

BlockDecomposition to_blocks(const CMat4& u, const BellFrame& frame);

/// Restriction of H to one block: c0 I + cx sx + cy sy + cz sz.
struct BlockCoefficients {
  double c0 = 0.0;
  double cx = 0.0;
  double cy = 0.0;
  double cz = 0.0;
};

/// Coefficients of both block restrictions of H_h (frame.h must equal p.h).
std::array<BlockCoefficients, 2> block_coefficients(const PhysicalParams& p, const BellFrame& frame);

/// Normalized parameters of the closed-form block
///   s = e^{i dplus} (cos dminus I - i sin dminus n.S),
///   n = (q b sin(h pi/2), q b cos(h pi/2), beta j).
struct ReducedBlockParams {
  double delta_plus = 0.0;
  double delta_minus = 0.0;
  double b_red = 0.0;
  double j_red = 1.0;
  int block_index = 1;

  bool degenerate() const { return delta_minus == 0.0 && b_red == 0.0 && j_red == 1.0; }
};

/// Block-restriction route to (dplus, dminus, b, j) for both blocks.
/// A block whose effective field vanishes is reported as (dminus, b, j) = (0, 0, 1).
std::array<ReducedBlockParams, 2> reduced_params(const PhysicalParams& p, const BellFrame& frame);

/// Evaluates the closed-form block. Throws std::domain_error when |n| deviates
/// from 1 by more than 1e-9.
CMat2 closed_form_block(const ReducedBlockParams& rp, const BellFrame& frame);

/// Unit rotation axis n of the closed form.
Eigen::Vector3d block_axis(const ReducedBlockParams& rp, const BellFrame& frame);

/// Extended Pauli basis of one block, as 4x4 operators in computational
/// coordinates supported on the block's two Bell states.
struct BlockPauliBasis {
  int block_index = 1;
  CMat4 identity;
  std::array<CMat4, 3> s;
};

BlockPauliBasis block_pauli_basis(const BellFrame& frame, int j);

}  // namespace bellgate
