#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "bellgate/linalg.hpp"
#include "test_random.hpp"

using namespace bellgate;
using bellgate::testing::random_hermitian;
using bellgate::testing::random_unitary;

namespace {

// exp(-i s H) by its Taylor series, summed until the terms vanish.
template <typename M>
M taylor_exp(const M& hm, double scale) {
  M sum = M::Identity();
  M term = M::Identity();
  for (int n = 1; n < 200; ++n) {
    term = term * (-kI * scale * hm) / static_cast<double>(n);
    sum += term;
    if (term.norm() < 1e-18) break;
  }
  return sum;
}

double max_abs(const Eigen::MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("pauli matrices") {
  CHECK(max_abs(pauli(3) - CMat2(Eigen::Vector2cd(1.0, -1.0).asDiagonal())) == 0.0);
  CMat2 x;
  x << 0, 1, 1, 0;
  CHECK(max_abs(pauli(1) - x) == 0.0);
  CMat2 y;
  y << 0, -kI, kI, 0;
  CHECK(max_abs(pauli(2) - y) == 0.0);
  CHECK_THROWS_AS(pauli(0), std::invalid_argument);
  CHECK_THROWS_AS(pauli(4), std::invalid_argument);
}

TEST_CASE("kron ordering and identities") {
  CHECK(max_abs(kron(CMat2::Identity(), CMat2::Identity()) - CMat4::Identity()) == 0.0);
  const CMat4 zz = kron(pauli(3), pauli(3));
  CHECK(max_abs(zz - CMat4(Eigen::Vector4cd(1, -1, -1, 1).asDiagonal())) == 0.0);

  CVec4 ket00 = CVec4::Zero();
  ket00(0) = 1.0;
  const CVec4 flipped = kron(pauli(1), CMat2::Identity()) * ket00;
  CHECK(std::abs(flipped(2) - 1.0) == 0.0);
  CHECK(flipped.norm() == doctest::Approx(1.0));

  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const CMat2 a = random_hermitian<2>(rng), b = random_hermitian<2>(rng);
    const CMat2 c = random_hermitian<2>(rng), d = random_hermitian<2>(rng);
    CHECK(max_abs(kron(a, b) * kron(c, d) - kron(a * c, b * d)) <= 1e-13);
    CHECK(max_abs(kron(a + c, b) - kron(a, b) - kron(c, b)) <= 1e-13);
    CHECK(max_abs(kron(a, 2.5 * b) - 2.5 * kron(a, b)) <= 1e-13);
  }
}

TEST_CASE("expm_hermitian closed forms") {
  CHECK(max_abs(expm_hermitian(CMat4::Zero().eval(), 3.7) - CMat4::Identity()) <= 1e-15);
  const double t = 0.83;
  CMat2 expected = CMat2::Zero();
  expected(0, 0) = std::exp(-kI * t);
  expected(1, 1) = std::exp(kI * t);
  CHECK(max_abs(expm_hermitian(pauli(3), t) - expected) <= 1e-15);

  const double half_pi = std::numbers::pi / 2;
  const CMat2 oracle = taylor_exp(pauli(1), half_pi);
  CHECK(max_abs(oracle - (-kI * pauli(1))) <= 1e-14);
  CHECK(max_abs(expm_hermitian(pauli(1), half_pi) - oracle) <= 1e-14);
}

TEST_CASE("expm_hermitian matches the power series on random inputs") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> scale(-1.5, 1.5);
  for (int trial = 0; trial < 100; ++trial) {
    const CMat4 hm = random_hermitian<4>(rng);
    const double s = scale(rng);
    CHECK(max_abs(expm_hermitian(hm, s) - taylor_exp(hm, s)) <= 1e-11);
  }
}

TEST_CASE("expm_hermitian is unitary and a one-parameter group") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> scale(-4.0, 4.0);
  for (int trial = 0; trial < 200; ++trial) {
    const CMat4 hm = random_hermitian<4>(rng);
    const double t1 = scale(rng), t2 = scale(rng);
    const CMat4 u = expm_hermitian(hm, t1);
    CHECK(dist_unitary(u) <= 1e-12);
    CHECK(max_abs(expm_hermitian(hm, t1 + t2) - u * expm_hermitian(hm, t2)) <= 1e-11);
  }
}

TEST_CASE("expm_hermitian rejects non-Hermitian input") {
  CMat2 m = pauli(1);
  m(0, 1) = 2.0;
  CHECK(hermitian_asymmetry(m) == doctest::Approx(1.0));
  CHECK_THROWS_AS(expm_hermitian(m, 1.0), std::domain_error);
}

TEST_CASE("dist_unitary") {
  CHECK(dist_unitary(CMat4::Identity()) == 0.0);
  const CMat4 d = Eigen::Vector4cd(1, 1, 1, 2).asDiagonal();
  CHECK(dist_unitary(d) == doctest::Approx(3.0));
}

TEST_CASE("dist_phase_invariant") {
  std::mt19937_64 rng(17);
  const CMat4 u = random_unitary(rng);
  CHECK(dist_phase_invariant(u, u) <= 1e-15);
  CHECK(dist_phase_invariant(u, (std::exp(kI * (std::numbers::pi / 7)) * u).eval()) <= 1e-15);
  const CMat4 flip = Eigen::Vector4cd(1, 1, 1, -1).asDiagonal();
  CHECK(dist_phase_invariant(CMat4::Identity(), flip) == doctest::Approx(0.5));
  CHECK_THROWS_AS(dist_phase_invariant(CMat4::Identity(), (2.0 * u).eval()), std::domain_error);

  std::uniform_real_distribution<double> angle(-3.2, 3.2);
  for (int trial = 0; trial < 50; ++trial) {
    const CMat4 a = random_unitary(rng), b = random_unitary(rng);
    const double d = dist_phase_invariant(a, b);
    CHECK(d == doctest::Approx(dist_phase_invariant(b, a)).epsilon(1e-12));
    CHECK(dist_phase_invariant((std::exp(kI * angle(rng)) * a).eval(), b) ==
          doctest::Approx(d).epsilon(1e-12));
    CHECK(d >= 0.0);
  }
}

TEST_CASE("all_finite") {
  CMat4 m = CMat4::Identity();
  CHECK(all_finite(m));
  m(1, 2) = Complex(0.0, std::nan(""));
  CHECK_FALSE(all_finite(m));
}
