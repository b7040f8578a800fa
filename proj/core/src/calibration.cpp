#include "bellgate/calibration.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include <Eigen/Dense>

#include "bellgate/errors.hpp"
#include "bellgate/serialization.hpp"

namespace bellgate {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_angle(double x) { return x - kTwoPi * std::round(x / kTwoPi); }

using Vec5 = Eigen::Matrix<double, 5, 1>;
using Mat5 = Eigen::Matrix<double, 5, 5>;

// Rows map (J1, J2, J3, B1, B2) to (c0_1, ca_1, cz_1, ca_2, cz_2), where ca is
// the component along the frame's transverse axis. H is linear in the couplings.
Mat5 coefficient_map(const BellFrame& frame) {
  const auto axis = transverse_axis(frame.h);
  Mat5 map;
  for (int col = 0; col < 5; ++col) {
    ParamVector v = ParamVector::Zero();
    v(0) = 1.0;
    v(1 + col) = 1.0;
    const auto c = block_coefficients(PhysicalParams::from_vector(v, frame.h), frame);
    map(0, col) = c[0].c0;
    for (int k = 0; k < 2; ++k) {
      map(1 + 2 * k, col) = axis[0] * c[k].cx + axis[1] * c[k].cy;
      map(2 + 2 * k, col) = c[k].cz;
    }
  }
  return map;
}

struct Goal {
  bool magnitude_only = false;
  double va = 0.0;
  double vz = 0.0;
  double magnitude = 0.0;
};

struct ConcreteBranch {
  Branch branch;
  std::array<Goal, 2> goals;
};

struct BlockOption {
  Goal goal;
  double delta_minus;
  int sign;
  int winding;
};

std::vector<BlockOption> block_options(const BlockTarget& bt, const BlockSigns& s, bool fixed_windings,
                                       int extra_windings) {
  if (!bt.delta_minus) throw std::invalid_argument("prescription block lacks a Rabi phase target");
  double base = *bt.delta_minus;
  while (base < 0.0) base += kTwoPi;
  const int max_w = fixed_windings ? 0 : extra_windings;
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);

  std::vector<BlockOption> out;
  for (int w = 0; w <= max_w; ++w) {
    const double d = base + kTwoPi * w;
    if (bt.b && bt.j) {
      out.push_back({{false, d * s.q * *bt.b, d * s.beta * *bt.j, 0.0}, d, 1, w});
    } else if (bt.b_relation) {
      for (int sign : {1, -1}) {
        out.push_back({{false, d * *bt.b_relation * sign * inv_sqrt2, d * sign * inv_sqrt2, 0.0}, d, sign, w});
      }
    } else if (bt.j) {
      const double along = std::sqrt(std::max(0.0, 1.0 - *bt.j * *bt.j));
      for (int sign : {1, -1}) out.push_back({{false, d * sign * along, d * s.beta * *bt.j, 0.0}, d, sign, w});
    } else if (bt.b) {
      const double longitudinal = std::sqrt(std::max(0.0, 1.0 - *bt.b * *bt.b));
      for (int sign : {1, -1}) {
        out.push_back({{false, d * s.q * *bt.b, d * sign * longitudinal, 0.0}, d, sign, w});
      }
    } else {
      out.push_back({{true, 0.0, 0.0, d}, d, 1, w});
    }
  }
  return out;
}

std::vector<ConcreteBranch> enumerate_branches(const PrescriptionTargets& tg, const BellFrame& frame,
                                               int extra_windings) {
  std::vector<double> dplus;
  const double wrapped = wrap_angle(tg.delta_plus_1.value_or(0.0));
  dplus.push_back(wrapped);
  if (std::abs(wrapped) > 1e-15 && std::abs(std::abs(wrapped) - kPi) > 1e-15) dplus.push_back(-wrapped);

  const bool fixed = is_cnot_tag(tg.gate.tag);
  const auto opts1 = block_options(tg.blocks[0], frame.signs[0], fixed, extra_windings);
  const auto opts2 = block_options(tg.blocks[1], frame.signs[1], fixed, extra_windings);

  std::vector<ConcreteBranch> out;
  for (double dp : dplus) {
    for (const auto& o1 : opts1) {
      for (const auto& o2 : opts2) {
        ConcreteBranch cb;
        cb.branch.delta_plus = dp;
        cb.branch.delta_minus = {o1.delta_minus, o2.delta_minus};
        cb.branch.signs = {o1.sign, o2.sign};
        cb.branch.windings = {o1.winding, o2.winding};
        cb.goals = {o1.goal, o2.goal};
        out.push_back(cb);
      }
    }
  }
  return out;
}

using Vec6 = Eigen::Matrix<double, 6, 1>;
using ResidualVec = Eigen::VectorXd;
using JacobianMat = Eigen::Matrix<double, Eigen::Dynamic, 6>;

// Residuals in rotation-vector form: v_k = t * (ca_k, cz_k) = dminus_k * (q b, beta j).
void evaluate(const Vec6& x, const Mat5& map, const ConcreteBranch& cb, double energy, ResidualVec& r,
              JacobianMat& jac) {
  const double t = x(0);
  const Vec5 theta = x.tail<5>();
  const Vec5 c = map * theta;
  int rows = 2;
  for (const Goal& g : cb.goals) rows += g.magnitude_only ? 1 : 2;
  r.resize(rows);
  jac.setZero(rows, 6);

  int row = 0;
  r(row) = wrap_angle(-t * c(0) - cb.branch.delta_plus);
  jac(row, 0) = -c(0);
  jac.block<1, 5>(row, 1) = -t * map.row(0);
  ++row;

  for (int k = 0; k < 2; ++k) {
    const Goal& g = cb.goals[static_cast<std::size_t>(k)];
    const int ia = 1 + 2 * k;
    const int iz = 2 + 2 * k;
    if (g.magnitude_only) {
      const double rho = std::hypot(c(ia), c(iz));
      r(row) = t * rho - g.magnitude;
      jac(row, 0) = rho;
      if (rho > 0.0) jac.block<1, 5>(row, 1) = t * (c(ia) * map.row(ia) + c(iz) * map.row(iz)) / rho;
      ++row;
    } else {
      r(row) = t * c(ia) - g.va;
      jac(row, 0) = c(ia);
      jac.block<1, 5>(row, 1) = t * map.row(ia);
      ++row;
      r(row) = t * c(iz) - g.vz;
      jac(row, 0) = c(iz);
      jac.block<1, 5>(row, 1) = t * map.row(iz);
      ++row;
    }
  }

  const double norm = theta.norm();
  r(row) = norm - energy;
  if (norm > 0.0) jac.block<1, 5>(row, 1) = theta.transpose() / norm;
}

struct NewtonResult {
  Vec6 x;
  double residual = std::numeric_limits<double>::infinity();
  bool converged = false;
};

NewtonResult damped_newton(Vec6 x, const Mat5& map, const ConcreteBranch& cb, const SolverOptions& opts) {
  ResidualVec r;
  JacobianMat jac;
  evaluate(x, map, cb, opts.energy_scale, r, jac);
  double cost = r.squaredNorm();
  double lambda = 1e-3;
  NewtonResult out{x, r.cwiseAbs().maxCoeff(), false};

  for (int it = 0; it < opts.max_iterations && out.residual > opts.newton_tol; ++it) {
    const Eigen::Matrix<double, 6, 6> jtj = jac.transpose() * jac;
    const Vec6 grad = jac.transpose() * r;
    bool improved = false;
    for (int attempt = 0; attempt < 12 && !improved; ++attempt) {
      const Eigen::Matrix<double, 6, 6> lhs = jtj + lambda * Eigen::Matrix<double, 6, 6>::Identity();
      const Vec6 step = lhs.ldlt().solve(-grad);
      const Vec6 trial = x + step;
      ResidualVec r_trial;
      JacobianMat jac_trial;
      evaluate(trial, map, cb, opts.energy_scale, r_trial, jac_trial);
      const double trial_cost = r_trial.squaredNorm();
      if (std::isfinite(trial_cost) && trial_cost < cost) {
        x = trial;
        r = std::move(r_trial);
        jac = std::move(jac_trial);
        cost = trial_cost;
        lambda = std::max(lambda / 3.0, 1e-15);
        improved = true;
      } else {
        lambda *= 4.0;
      }
    }
    if (!improved) break;
    out.x = x;
    out.residual = r.cwiseAbs().maxCoeff();
  }
  out.converged = out.residual <= opts.newton_tol;
  return out;
}

const BellFrame& frame_for(const PrescriptionTargets& tg) { return bell_frame(tg.h); }

}  // namespace

int PrescriptionTargets::active_constraints() const {
  int n = delta_plus_1 ? 1 : 0;
  for (const BlockTarget& bt : blocks) {
    n += bt.delta_minus ? 1 : 0;
    n += bt.b ? 1 : 0;
    n += bt.j ? 1 : 0;
    n += bt.b_relation ? 1 : 0;
    n += bt.b_unit_limit ? 1 : 0;
  }
  return n;
}

PrescriptionTargets prescription_targets(const GateId& g, int m, int m_prime, bool alternative_route) {
  if (!is_bell_tag(g.tag) || g.tag == GateTag::kTranslator) {
    throw std::invalid_argument("prescription_targets: " + std::string(gate_tag_name(g.tag)) +
                                " has no prescription");
  }
  if (is_phase_tag(g.tag) && !g.phi) throw std::invalid_argument("phase gate requires phi");
  if (alternative_route && g.tag != GateTag::kSPhiQ1) {
    throw std::invalid_argument("the alternative h = 3 route exists only for S_phi_q1");
  }

  PrescriptionTargets tg;
  tg.gate = g;
  tg.alternative_route = alternative_route;
  switch (g.tag) {
    case GateTag::kSPhiQ2: {
      tg.h = 1;
      tg.delta_plus_1 = kTwoPi;
      const BellFrame& f = bell_frame(tg.h);
      for (int k = 0; k < 2; ++k) {
        BlockTarget& bt = tg.blocks[static_cast<std::size_t>(k)];
        bt.delta_minus = *g.phi;
        bt.b = 0.0;
        bt.j = static_cast<double>(f.signs[static_cast<std::size_t>(k)].beta);
      }
      break;
    }
    case GateTag::kSPhiQ1: {
      if (alternative_route) {
        // Same block shape as (1 (x) S_phi) on the h = 3 frame.
        tg.h = 3;
        tg.delta_plus_1 = kTwoPi;
        const BellFrame& f = bell_frame(tg.h);
        for (int k = 0; k < 2; ++k) {
          BlockTarget& bt = tg.blocks[static_cast<std::size_t>(k)];
          bt.delta_minus = *g.phi;
          bt.b = 0.0;
          bt.j = static_cast<double>(f.signs[static_cast<std::size_t>(k)].beta);
        }
      } else {
        tg.h = 1;
        tg.delta_plus_1 = *g.phi;
        tg.blocks[0].delta_minus = kTwoPi;
        tg.blocks[1].delta_minus = kTwoPi;
      }
      break;
    }
    case GateTag::kHQ2:
    case GateTag::kHQ1: {
      tg.h = g.tag == GateTag::kHQ2 ? 1 : 3;
      tg.delta_plus_1 = kPi / 2;
      for (BlockTarget& bt : tg.blocks) {
        bt.delta_minus = kPi / 2;
        bt.b_relation = g.tag == GateTag::kHQ2 ? 1 : -1;
      }
      break;
    }
    case GateTag::kCnot12:
    case GateTag::kCnot21: {
      if (m < 0 || m_prime < 0) throw std::invalid_argument("CNOT windings m, m' must be non-negative");
      tg.h = g.tag == GateTag::kCnot12 ? 1 : 3;
      tg.m = m;
      tg.m_prime = m_prime;
      tg.delta_plus_1 = kPi / 4;
      tg.blocks[0].delta_minus = kTwoPi * m;
      tg.blocks[1].delta_minus = kPi / 2 + kTwoPi * m_prime;
      tg.blocks[0].j = 0.0;
      tg.blocks[1].j = 0.0;
      tg.blocks[0].b_unit_limit = true;
      break;
    }
    default:
      throw std::logic_error("prescription_targets: unhandled tag");
  }
  return tg;
}

CMat4 target_unitary(const GateId& g) { return from_bell_labels(d_gate(g)); }

std::vector<double> prescription_residuals(const PrescriptionTargets& tg, const Branch& branch,
                                           const PhysicalParams& p) {
  const BellFrame& frame = frame_for(tg);
  const auto rp = reduced_params(p, frame);
  std::vector<double> out;
  if (tg.delta_plus_1) out.push_back(wrap_angle(rp[0].delta_plus - branch.delta_plus));
  for (int k = 0; k < 2; ++k) {
    const BlockTarget& bt = tg.blocks[static_cast<std::size_t>(k)];
    const ReducedBlockParams& r = rp[static_cast<std::size_t>(k)];
    const BlockSigns& s = frame.signs[static_cast<std::size_t>(k)];
    if (bt.delta_minus) out.push_back(r.delta_minus - branch.delta_minus[static_cast<std::size_t>(k)]);
    // A block with zero Rabi phase is e^{i dplus} I whatever its axis.
    const bool vacuous = branch.delta_minus[static_cast<std::size_t>(k)] == 0.0;
    if (bt.b) out.push_back(vacuous ? 0.0 : r.b_red - *bt.b);
    if (bt.j) out.push_back(vacuous ? 0.0 : r.j_red - *bt.j);
    if (bt.b_relation) out.push_back(vacuous ? 0.0 : r.b_red - *bt.b_relation * s.q * s.beta * r.j_red);
    if (bt.b_unit_limit) out.push_back(vacuous ? 0.0 : std::abs(r.b_red) - 1.0);
  }
  return out;
}

PrescriptionCard solve_physical(const PrescriptionTargets& tg, const SolverOptions& opts) {
  if (opts.starts < 1 || opts.max_iterations < 1 || !(opts.energy_scale > 0.0)) {
    throw std::invalid_argument("solve_physical: invalid solver options");
  }
  const BellFrame& frame = frame_for(tg);
  const Mat5 map = coefficient_map(frame);
  const auto branches = enumerate_branches(tg, frame, opts.extra_windings);
  const CMat4 target = target_unitary(tg.gate);

  const int n_branches = static_cast<int>(branches.size());
  const int per_branch = std::max(2, (opts.starts + n_branches - 1) / n_branches);

  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> time_dist(0.2, 4.0);
  std::normal_distribution<double> coupling_dist(0.0, 1.0);

  std::optional<PrescriptionCard> best;
  double best_residual = std::numeric_limits<double>::infinity();
  double best_mismatch = std::numeric_limits<double>::infinity();
  bool any_converged = false;

  for (const ConcreteBranch& cb : branches) {
    for (int s = 0; s < per_branch; ++s) {
      Vec6 x;
      x(0) = time_dist(rng);
      Vec5 theta;
      for (int i = 0; i < 5; ++i) theta(i) = coupling_dist(rng);
      x.tail<5>() = theta.normalized() * opts.energy_scale;

      NewtonResult res = damped_newton(x, map, cb, opts);
      best_residual = std::min(best_residual, res.residual);
      if (!res.converged) continue;
      if (res.x(0) < 0.0) res.x = -res.x;
      any_converged = true;

      const PhysicalParams p = PhysicalParams::from_vector(res.x, tg.h);
      const double err = dist_phase_invariant(evolve(p), target);
      best_mismatch = std::min(best_mismatch, err);
      if (err > opts.accept_tol) continue;
      if (best && !(p.t < best->solved.t - 1e-12)) continue;

      PrescriptionCard card;
      card.targets = tg;
      card.branch = cb.branch;
      card.solved = p;
      card.realized_error = err;
      card.residuals = prescription_residuals(tg, cb.branch, p);
      best = std::move(card);
    }
  }

  if (best) return *best;
  if (any_converged) {
    std::ostringstream msg;
    msg << "solve_physical: prescription for " << gate_tag_name(tg.gate.tag)
        << " is met but never realizes the gate (best realized_error " << best_mismatch << ")";
    throw InfeasibleError(msg.str());
  }
  std::ostringstream msg;
  msg << "solve_physical: no convergence for " << gate_tag_name(tg.gate.tag) << " after "
      << per_branch * n_branches << " starts (best residual " << best_residual << ")";
  throw SolverError(msg.str(), best_residual);
}

PrescriptionCard cnot_family(const GateId& g, int m, double field_scale, double kappa) {
  if (!is_cnot_tag(g.tag)) throw std::invalid_argument("cnot_family: gate must be CNOT_12 or CNOT_21");
  if (m < 1) throw std::invalid_argument("cnot_family: m must be >= 1");
  if (!(field_scale > 0.0) || !(kappa > 0.0) || !std::isfinite(field_scale) || !std::isfinite(kappa)) {
    throw std::invalid_argument("cnot_family: field_scale and kappa must be positive");
  }

  const PrescriptionTargets tg = prescription_targets(g, m, m);
  const BellFrame& frame = frame_for(tg);
  const Mat5 map = coefficient_map(frame);
  const Eigen::FullPivLU<Mat5> lu(map);
  if (lu.rank() < 5) throw std::logic_error("cnot_family: block coefficient map is singular");

  const double field = field_scale * m * kappa;
  const double t = kTwoPi * m / field;
  const double swap_phase = kPi / 2 + kTwoPi * m;
  const CMat4 target = target_unitary(g);

  std::optional<PrescriptionCard> best;
  for (double dplus : {kPi / 4, -kPi / 4}) {
    for (int s1 : {1, -1}) {
      for (int s2 : {1, -1}) {
        Vec5 coeffs;
        coeffs << -dplus / t, s1 * field, kappa, s2 * swap_phase / t, 0.0;
        const Vec5 theta = lu.solve(coeffs);
        ParamVector v;
        v << t, theta;
        const PhysicalParams p = PhysicalParams::from_vector(v, tg.h);
        const double err = dist_phase_invariant(evolve(p), target);
        if (best && !(err < best->realized_error)) continue;
        PrescriptionCard card;
        card.targets = tg;
        card.branch.delta_plus = dplus;
        card.branch.delta_minus = {kTwoPi * m, swap_phase};
        card.branch.signs = {s1, s2};
        card.solved = p;
        card.realized_error = err;
        card.residuals = prescription_residuals(tg, card.branch, p);
        card.family = FamilyInfo{field_scale, kappa, reduced_params(p, frame)[0].b_red};
        best = std::move(card);
      }
    }
  }
  if (!best || !std::isfinite(best->realized_error)) {
    throw SolverError("cnot_family: could not evaluate family member", std::numeric_limits<double>::infinity());
  }
  return *best;
}

std::string family_csv(const std::vector<PrescriptionCard>& cards) {
  std::ostringstream out;
  out << "gate,m,m_prime,field_scale,kappa,b_alpha,t,J1,J2,J3,B1,B2,realized_error\n";
  for (const PrescriptionCard& c : cards) {
    const FamilyInfo fam = c.family.value_or(FamilyInfo{});
    out << gate_tag_name(c.targets.gate.tag) << ',' << c.targets.m << ',' << c.targets.m_prime << ','
        << format_real(fam.field_scale) << ',' << format_real(fam.kappa) << ',' << format_real(fam.b_alpha) << ','
        << format_real(c.solved.t) << ',' << format_real(c.solved.j[0]) << ',' << format_real(c.solved.j[1]) << ','
        << format_real(c.solved.j[2]) << ',' << format_real(c.solved.b1) << ',' << format_real(c.solved.b2) << ','
        << format_real(c.realized_error) << '\n';
  }
  return out.str();
}

}  // namespace bellgate
