#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "bellgate/calibration.hpp"
#include "bellgate/errors.hpp"

using namespace bellgate;

namespace {

constexpr double kPi = std::numbers::pi;

GateId gate(GateTag t, std::optional<double> phi = std::nullopt) { return GateId::make(t, phi); }

double max_abs_residual(const PrescriptionCard& c) {
  double r = 0.0;
  for (double v : c.residuals) r = std::max(r, std::abs(v));
  return r;
}

double energy(const PhysicalParams& p) {
  return std::sqrt(p.j[0] * p.j[0] + p.j[1] * p.j[1] + p.j[2] * p.j[2] + p.b1 * p.b1 + p.b2 * p.b2);
}

}  // namespace

TEST_CASE("prescription rows") {
  const double phi = 0.61;
  const PrescriptionTargets s2 = prescription_targets(gate(GateTag::kSPhiQ2, phi));
  CHECK(s2.h == 1);
  CHECK(*s2.delta_plus_1 == doctest::Approx(2 * kPi));
  for (int k = 0; k < 2; ++k) {
    CHECK(*s2.blocks[k].delta_minus == doctest::Approx(phi));
    CHECK(*s2.blocks[k].b == 0.0);
    CHECK(*s2.blocks[k].j == bell_frame(1).signs[k].beta);
  }

  const PrescriptionTargets s1 = prescription_targets(gate(GateTag::kSPhiQ1, phi));
  CHECK(s1.h == 1);
  CHECK(*s1.delta_plus_1 == doctest::Approx(phi));
  CHECK(*s1.blocks[0].delta_minus == doctest::Approx(2 * kPi));
  CHECK(*s1.blocks[1].delta_minus == doctest::Approx(2 * kPi));
  CHECK_FALSE(s1.blocks[0].b.has_value());
  CHECK_FALSE(s1.blocks[0].j.has_value());

  const PrescriptionTargets h2 = prescription_targets(gate(GateTag::kHQ2));
  CHECK(h2.h == 1);
  CHECK(*h2.delta_plus_1 == doctest::Approx(kPi / 2));
  CHECK(*h2.blocks[0].delta_minus == doctest::Approx(kPi / 2));
  CHECK(*h2.blocks[0].b_relation == 1);

  const PrescriptionTargets h1 = prescription_targets(gate(GateTag::kHQ1));
  CHECK(h1.h == 3);
  CHECK(*h1.blocks[1].b_relation == -1);

  const PrescriptionTargets c21 = prescription_targets(gate(GateTag::kCnot21), 2, 3);
  CHECK(c21.h == 3);
  CHECK(*c21.delta_plus_1 == doctest::Approx(kPi / 4));
  CHECK(*c21.blocks[0].delta_minus == doctest::Approx(4 * kPi));
  CHECK(*c21.blocks[1].delta_minus == doctest::Approx(kPi / 2 + 6 * kPi));
  CHECK(*c21.blocks[0].j == 0.0);
  CHECK(*c21.blocks[1].j == 0.0);
  CHECK(c21.blocks[0].b_unit_limit);
  CHECK(prescription_targets(gate(GateTag::kCnot12)).h == 1);

  CHECK(prescription_targets(gate(GateTag::kSPhiQ1, phi), 1, 0, true).h == 3);
  CHECK_THROWS_AS(prescription_targets(gate(GateTag::kHQ1), 1, 0, true), std::invalid_argument);
  CHECK_THROWS_AS(prescription_targets(gate(GateTag::kTranslator)), std::invalid_argument);
  CHECK_THROWS_AS(prescription_targets(GateId::make(GateTag::kBH, std::nullopt, 1)), std::invalid_argument);
  CHECK_THROWS_AS(prescription_targets(gate(GateTag::kCnot12), -1, 0), std::invalid_argument);
}

TEST_CASE("target unitary is the Bell-label gate in computational coordinates") {
  const GateId g = gate(GateTag::kCnot21);
  const CMat4 q = bell_basis_matrix();
  CHECK((target_unitary(g) - q * d_gate(g) * q.adjoint()).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("every Bell-label generator is synthesized") {
  const std::vector<GateId> gates{gate(GateTag::kSPhiQ2, kPi / 8), gate(GateTag::kSPhiQ2, kPi / 4),
                                  gate(GateTag::kSPhiQ2, 1.234),   gate(GateTag::kSPhiQ1, kPi / 8),
                                  gate(GateTag::kSPhiQ1, kPi / 4), gate(GateTag::kSPhiQ1, 1.234),
                                  gate(GateTag::kHQ2),             gate(GateTag::kHQ1),
                                  gate(GateTag::kCnot12),          gate(GateTag::kCnot21)};
  for (const GateId& g : gates) {
    CAPTURE(gate_tag_name(g.tag));
    const PrescriptionTargets tg = prescription_targets(g);
    const PrescriptionCard card = solve_physical(tg);
    // Oracle: direct multiplication against the Bell change of basis.
    const CMat4 q = bell_basis_matrix();
    const double err = dist_phase_invariant(evolve(card.solved), (q * d_gate(g) * q.adjoint()).eval());
    CHECK(err <= 1e-8);
    CHECK(card.realized_error == doctest::Approx(err).epsilon(1e-6));
    CHECK(card.solved.h == tg.h);
    CHECK(card.solved.t > 0.0);
    CHECK(energy(card.solved) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(static_cast<int>(card.residuals.size()) == tg.active_constraints());
    CHECK(max_abs_residual(card) <= 1e-9);
    const auto again = prescription_residuals(tg, card.branch, card.solved);
    CHECK(again == card.residuals);
  }
}

TEST_CASE("alternative route and trivial phase") {
  const PrescriptionCard alt = solve_physical(prescription_targets(gate(GateTag::kSPhiQ1, 0.5), 1, 0, true));
  CHECK(alt.solved.h == 3);
  CHECK(alt.realized_error <= 1e-8);

  const PrescriptionCard zero = solve_physical(prescription_targets(gate(GateTag::kSPhiQ2, 0.0)));
  CHECK(zero.realized_error <= 1e-10);
}

TEST_CASE("higher CNOT windings") {
  const PrescriptionCard c = solve_physical(prescription_targets(gate(GateTag::kCnot21), 2, 3));
  CHECK(c.realized_error <= 1e-8);
  CHECK(c.branch.delta_minus[0] == doctest::Approx(4 * kPi));
  CHECK(c.branch.delta_minus[1] == doctest::Approx(kPi / 2 + 6 * kPi));
  CHECK(max_abs_residual(c) <= 1e-9);
}

TEST_CASE("solver is deterministic and minimal in time") {
  const PrescriptionTargets tg = prescription_targets(gate(GateTag::kHQ2));
  const PrescriptionCard a = solve_physical(tg);
  const PrescriptionCard b = solve_physical(tg);
  CHECK(a == b);

  SolverOptions few;
  few.starts = 4;
  few.seed = 99;
  const PrescriptionCard c = solve_physical(tg, few);
  CHECK(c.realized_error <= 1e-8);
  CHECK(a.solved.t <= c.solved.t + 1e-9);

  SolverOptions bad;
  bad.starts = 0;
  CHECK_THROWS_AS(solve_physical(tg, bad), std::invalid_argument);
}

TEST_CASE("impossible tolerance is reported as infeasible") {
  SolverOptions strict;
  strict.accept_tol = -1.0;
  CHECK_THROWS_AS(solve_physical(prescription_targets(gate(GateTag::kHQ1)), strict), InfeasibleError);
}

TEST_CASE("CNOT family converges as the field dominates") {
  for (GateTag t : {GateTag::kCnot12, GateTag::kCnot21}) {
    const GateId g = gate(t);
    double previous = std::numeric_limits<double>::infinity();
    double previous_b = 0.0;
    for (int m = 1; m <= 8; ++m) {
      const PrescriptionCard c = cnot_family(g, m, 6.0);
      REQUIRE(c.family.has_value());
      CHECK(c.realized_error < previous);
      CHECK(c.realized_error > 0.0);
      CHECK(std::abs(c.family->b_alpha) > previous_b);
      CHECK(std::abs(reduced_params(c.solved, bell_frame(c.solved.h))[1].j_red) <= 1e-12);
      previous = c.realized_error;
      previous_b = std::abs(c.family->b_alpha);
      if (std::abs(c.family->b_alpha) >= 0.999) CHECK(c.realized_error <= 5e-3);
    }
    CHECK(cnot_family(g, 10, 6.0).realized_error < cnot_family(g, 1, 6.0).realized_error);

    double prev_scale = std::numeric_limits<double>::infinity();
    for (double s : {1.0, 2.0, 4.0, 8.0, 16.0}) {
      const PrescriptionCard c = cnot_family(g, 4, s);
      CHECK(c.realized_error < prev_scale);
      prev_scale = c.realized_error;
    }
  }
  const PrescriptionCard m4 = cnot_family(gate(GateTag::kCnot12), 4, 6.0);
  CHECK(std::abs(m4.family->b_alpha) >= 0.999);
  CHECK(m4.realized_error <= 5e-3);

  CHECK_THROWS_AS(cnot_family(gate(GateTag::kHQ1), 1, 6.0), std::invalid_argument);
  CHECK_THROWS_AS(cnot_family(gate(GateTag::kCnot12), 0, 6.0), std::invalid_argument);
  CHECK_THROWS_AS(cnot_family(gate(GateTag::kCnot12), 1, -1.0), std::invalid_argument);
}

TEST_CASE("family CSV") {
  std::vector<PrescriptionCard> cards;
  for (int m = 1; m <= 3; ++m) cards.push_back(cnot_family(gate(GateTag::kCnot12), m, 6.0));
  const std::string csv = family_csv(cards);
  CHECK(csv.rfind("gate,m,m_prime,field_scale,kappa,b_alpha,t,J1,J2,J3,B1,B2,realized_error\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
}
