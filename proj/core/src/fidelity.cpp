#include "bellgate/fidelity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "bellgate/errors.hpp"

namespace bellgate {

namespace {

std::array<CMat2, 2> block_map(const PhysicalParams& p, const BellFrame& frame) {
  return to_blocks(evolve_unchecked(p), frame).blocks;
}

void check_finite(const std::array<CMat2, 2>& blocks, const ParamVector& point, const ParamVector& dir) {
  if (all_finite(blocks[0]) && all_finite(blocks[1])) return;
  Eigen::Index idx = 0;
  for (Eigen::Index i = 0; i < point.size(); ++i) {
    if (!std::isfinite(point(i))) {
      idx = i;
      break;
    }
    if (std::abs(dir(i)) > std::abs(dir(idx))) idx = i;
  }
  throw NumericalError("directional_derivatives: non-finite block evaluation along " +
                           std::string(param_name(static_cast<int>(idx))),
                       static_cast<std::size_t>(idx));
}

void check_state(const BlockState& state, const PhysicalParams& p) {
  if (state.h != p.h) throw std::invalid_argument("state frame direction does not match params");
}

double halton(std::uint64_t index, unsigned base) {
  double f = 1.0;
  double r = 0.0;
  while (index > 0) {
    f /= base;
    r += f * static_cast<double>(index % base);
    index /= base;
  }
  return r;
}

}  // namespace

BlockState BlockState::make(const std::array<Complex, 4>& amplitudes, int h) {
  if (h < 1 || h > 3) throw std::invalid_argument("BlockState: h must be 1, 2 or 3");
  double norm2 = 0.0;
  for (const Complex& a : amplitudes) {
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) throw std::invalid_argument("BlockState: non-finite amplitude");
    norm2 += std::norm(a);
  }
  if (std::abs(norm2 - 1.0) > tol::kStructural) throw std::invalid_argument("BlockState: amplitudes must have unit norm");
  BlockState s;
  s.amplitudes = amplitudes;
  s.h = h;
  return s;
}

BlockState BlockState::normalized(const std::array<Complex, 4>& amplitudes, int h) {
  double norm2 = 0.0;
  for (const Complex& a : amplitudes) norm2 += std::norm(a);
  if (!(norm2 > 0.0) || !std::isfinite(norm2)) throw std::invalid_argument("BlockState: cannot normalize zero state");
  std::array<Complex, 4> scaled = amplitudes;
  const double inv = 1.0 / std::sqrt(norm2);
  for (Complex& a : scaled) a *= inv;
  return make(scaled, h);
}

CVec4 BlockState::frame_vector() const {
  CVec4 v;
  for (int i = 0; i < 4; ++i) v(i) = amplitudes[static_cast<std::size_t>(i)];
  return v;
}

CVec4 BlockState::computational() const { return frame().change_of_basis * frame_vector(); }

std::vector<BlockState> sample_states(int h, int count, std::uint64_t seed) {
  if (count < 0) throw std::invalid_argument("sample_states: count must be non-negative");
  constexpr std::array<unsigned, 8> kBases{2, 3, 5, 7, 11, 13, 17, 19};
  std::vector<BlockState> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int n = 0; n < count; ++n) {
    const std::uint64_t index = seed + static_cast<std::uint64_t>(n) + 1;
    std::array<double, 8> g{};
    for (std::size_t d = 0; d < 8; d += 2) {
      // Box-Muller: Halton coordinates are in (0, 1) for index >= 1.
      const double u1 = halton(index, kBases[d]);
      const double u2 = halton(index, kBases[d + 1]);
      const double radius = std::sqrt(-2.0 * std::log(u1));
      g[d] = radius * std::cos(2.0 * std::numbers::pi * u2);
      g[d + 1] = radius * std::sin(2.0 * std::numbers::pi * u2);
    }
    std::array<Complex, 4> amps;
    for (std::size_t k = 0; k < 4; ++k) amps[k] = Complex(g[2 * k], g[2 * k + 1]);
    out.push_back(BlockState::normalized(amps, h));
  }
  return out;
}

BlockDerivatives directional_derivatives(const PhysicalParams& p, const Perturbation& dp, const BellFrame& frame) {
  if (p.h != frame.h) throw std::invalid_argument("directional_derivatives: frame direction does not match params");
  BlockDerivatives out;
  const double magnitude = dp.dp.norm();
  if (!std::isfinite(magnitude)) {
    Eigen::Index idx = 0;
    for (Eigen::Index i = 0; i < dp.dp.size(); ++i) {
      if (!std::isfinite(dp.dp(i))) {
        idx = i;
        break;
      }
    }
    throw NumericalError("directional_derivatives: non-finite perturbation", static_cast<std::size_t>(idx));
  }
  if (magnitude == 0.0) {
    out.first = {CMat2::Zero(), CMat2::Zero()};
    out.second = {CMat2::Zero(), CMat2::Zero()};
    return out;
  }

  const ParamVector x0 = p.as_vector();
  const ParamVector dir = dp.dp / magnitude;
  const double scale = std::max(1.0, x0.norm());
  // Steps balance truncation after one Richardson pass against round-off.
  const double h1 = std::cbrt(std::numeric_limits<double>::epsilon()) * scale;
  const double h2 = std::pow(std::numeric_limits<double>::epsilon(), 0.25) * scale;

  auto eval = [&](double step) {
    const ParamVector point = x0 + step * dir;
    auto blocks = block_map(PhysicalParams::from_vector(point, p.h), frame);
    check_finite(blocks, point, dir);
    return blocks;
  };

  const auto center = eval(0.0);
  auto first_diff = [&](double step) {
    const auto plus = eval(step);
    const auto minus = eval(-step);
    std::array<CMat2, 2> d;
    for (int k = 0; k < 2; ++k) d[k] = (plus[k] - minus[k]) / (2.0 * step);
    return d;
  };
  auto second_diff = [&](double step) {
    const auto plus = eval(step);
    const auto minus = eval(-step);
    std::array<CMat2, 2> d;
    for (int k = 0; k < 2; ++k) d[k] = (plus[k] - 2.0 * center[k] + minus[k]) / (step * step);
    return d;
  };

  const auto d1_coarse = first_diff(h1);
  const auto d1_fine = first_diff(0.5 * h1);
  const auto d2_coarse = second_diff(h2);
  const auto d2_fine = second_diff(0.5 * h2);
  for (int k = 0; k < 2; ++k) {
    out.first[k] = magnitude * (4.0 * d1_fine[k] - d1_coarse[k]) / 3.0;
    out.second[k] = magnitude * magnitude * (4.0 * d2_fine[k] - d2_coarse[k]) / 3.0;
  }
  return out;
}

double fidelity_exact(const BlockState& state, const PhysicalParams& p, const Perturbation& dp) {
  check_state(state, p);
  const CVec4 psi0 = state.computational();
  const PhysicalParams shifted = PhysicalParams::from_vector(p.as_vector() + dp.dp, p.h);
  const CVec4 ideal = evolve_unchecked(p) * psi0;
  const CVec4 actual = evolve_unchecked(shifted) * psi0;
  const double f2 = std::norm(ideal.dot(actual));
  if (!std::isfinite(f2)) throw NumericalError("fidelity_exact: non-finite overlap", 0);
  return f2;
}

ExpansionTerms expansion_terms(const BlockState& state, const PhysicalParams& p, const Perturbation& dp) {
  check_state(state, p);
  const BellFrame& frame = state.frame();
  const auto blocks = block_map(p, frame);
  const BlockDerivatives d = directional_derivatives(p, dp, frame);
  ExpansionTerms terms;
  for (int k = 0; k < 2; ++k) {
    CVec2 alpha;
    alpha << state.amplitudes[static_cast<std::size_t>(2 * k)], state.amplitudes[static_cast<std::size_t>(2 * k + 1)];
    const CVec2 moved = d.first[k] * alpha;
    terms.a += moved.squaredNorm();
    terms.b += alpha.dot(blocks[k].adjoint() * moved);
    terms.second += alpha.dot(blocks[k].adjoint() * (d.second[k] * alpha));
  }
  return terms;
}

double fidelity_second_order(const BlockState& state, const PhysicalParams& p, const Perturbation& dp,
                             ExpansionVariant variant) {
  const ExpansionTerms t = expansion_terms(state, p, dp);
  switch (variant) {
    case ExpansionVariant::kBilinear:
      return 1.0 - t.a + std::norm(t.b);
    case ExpansionVariant::kDirect:
      return 1.0 + 2.0 * t.b.real() + std::norm(t.b) + t.second.real();
  }
  throw std::logic_error("fidelity_second_order: unknown variant");
}

ParamVector infidelity_gradient(const BlockState& state, const PhysicalParams& p, const Perturbation& dp) {
  check_state(state, p);
  const BellFrame& frame = state.frame();
  const auto blocks = block_map(p, frame);
  std::array<std::array<CVec2, 2>, kNumParams> moved;
  Eigen::Matrix<Complex, kNumParams, 1> overlap;
  for (int i = 0; i < kNumParams; ++i) {
    Perturbation unit;
    unit.dp(i) = 1.0;
    const BlockDerivatives d = directional_derivatives(p, unit, frame);
    overlap(i) = 0.0;
    for (int k = 0; k < 2; ++k) {
      CVec2 alpha;
      alpha << state.amplitudes[static_cast<std::size_t>(2 * k)], state.amplitudes[static_cast<std::size_t>(2 * k + 1)];
      moved[i][k] = d.first[k] * alpha;
      overlap(i) += alpha.dot(blocks[k].adjoint() * moved[i][k]);
    }
  }
  Eigen::Matrix<double, kNumParams, kNumParams> quad;
  for (int i = 0; i < kNumParams; ++i) {
    for (int l = 0; l < kNumParams; ++l) {
      Complex a = 0.0;
      for (int k = 0; k < 2; ++k) a += moved[i][k].dot(moved[l][k]);
      quad(i, l) = a.real() - (std::conj(overlap(i)) * overlap(l)).real();
    }
  }
  const Eigen::Matrix<double, kNumParams, kNumParams> sym = 0.5 * (quad + quad.transpose());
  return 2.0 * sym * dp.dp;
}

FidelityReport fidelity_report(const PrescriptionCard& card, const BlockState& state, const Perturbation& dp,
                               int state_id) {
  FidelityReport r;
  r.gate = card.targets.gate;
  r.card = card;
  r.state_id = state_id;
  r.dp = dp;
  r.f2_exact = fidelity_exact(state, card.solved, dp);
  r.f2_second_order = fidelity_second_order(state, card.solved, dp);
  r.per_parameter_gradient = infidelity_gradient(state, card.solved, dp);
  r.cubic_residual = std::abs(r.f2_second_order - r.f2_exact);
  return r;
}

SweepResult sensitivity_sweep(const PrescriptionCard& card, const std::vector<BlockState>& states,
                              const SweepGrid& grid) {
  if (states.empty()) throw std::invalid_argument("sensitivity_sweep: no states");
  const bool empty_grid = std::all_of(grid.begin(), grid.end(), [](const auto& steps) { return steps.empty(); });
  if (empty_grid) throw std::invalid_argument("sensitivity_sweep: empty grid");
  for (const BlockState& s : states) {
    if (s.h != card.solved.h) throw std::invalid_argument("sensitivity_sweep: state frame does not match card");
  }

  SweepResult result;
  std::array<double, kNumParams> sum{};
  std::array<int, kNumParams> count{};
  for (std::size_t sid = 0; sid < states.size(); ++sid) {
    for (int i = 0; i < kNumParams; ++i) {
      for (double step : grid[static_cast<std::size_t>(i)]) {
        Perturbation dp;
        dp.dp(i) = step;
        FidelityReport r = fidelity_report(card, states[sid], dp, static_cast<int>(sid));
        r.param = i;
        if (step != 0.0) {
          sum[static_cast<std::size_t>(i)] += (1.0 - r.f2_exact) / (step * step);
          ++count[static_cast<std::size_t>(i)];
        }
        result.reports.push_back(std::move(r));
      }
    }
  }
  for (int i = 0; i < kNumParams; ++i) {
    if (count[static_cast<std::size_t>(i)] > 0) {
      result.ranking.emplace_back(i, sum[static_cast<std::size_t>(i)] / count[static_cast<std::size_t>(i)]);
    }
  }
  std::stable_sort(result.ranking.begin(), result.ranking.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  return result;
}

}  // namespace bellgate
