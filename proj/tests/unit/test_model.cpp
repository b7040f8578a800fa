#include <doctest.h>

#include <cmath>
#include <random>

#include "bellgate/model.hpp"
#include "test_random.hpp"

using namespace bellgate;
using bellgate::testing::random_params;

namespace {

double max_abs(const Eigen::MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("parameter names") {
  CHECK(param_name(Param::kT) == "t");
  CHECK(param_name(Param::kB2) == "B2");
  for (int i = 0; i < kNumParams; ++i) CHECK(static_cast<int>(param_from_name(param_name(i))) == i);
  CHECK_THROWS_AS(param_from_name("J4"), std::invalid_argument);
}

TEST_CASE("validation") {
  PhysicalParams p;
  p.t = -0.1;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  CHECK_THROWS_AS(evolve(p), std::invalid_argument);
  p.t = 1.0;
  p.h = 4;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p.h = 2;
  p.j[1] = std::nan("");
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("vector round trip") {
  std::mt19937_64 rng(3);
  const PhysicalParams p = random_params(rng, 2);
  CHECK(PhysicalParams::from_vector(p.as_vector(), 2) == p);
}

TEST_CASE("zero couplings give the zero Hamiltonian") {
  for (int h = 1; h <= 3; ++h) {
    PhysicalParams p;
    p.h = h;
    CHECK(build_hamiltonian(p).norm() == 0.0);
  }
}

TEST_CASE("h = 3 Hamiltonian is the Kronecker diagonal") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    PhysicalParams p = random_params(rng, 3);
    p.j[0] = p.j[1] = 0.0;
    const double j3 = p.j[2], b1 = p.b1, b2 = p.b2;
    // sigma_z (x) sigma_z = diag(1,-1,-1,1), sigma_z (x) 1 = diag(1,1,-1,-1), 1 (x) sigma_z = diag(1,-1,1,-1).
    const Eigen::Vector4cd expected(j3 - b1 - b2, -j3 - b1 + b2, -j3 + b1 - b2, j3 + b1 + b2);
    CHECK(max_abs(build_hamiltonian(p) - CMat4(expected.asDiagonal())) <= 1e-15);
  }
}

TEST_CASE("Hamiltonian is exactly Hermitian and linear in each coupling") {
  std::mt19937_64 rng(7);
  for (int h = 1; h <= 3; ++h) {
    for (int trial = 0; trial < 20; ++trial) {
      const PhysicalParams p = random_params(rng, h);
      const PhysicalParams q = random_params(rng, h);
      CHECK(max_abs(build_hamiltonian(p) - build_hamiltonian(p).adjoint()) == 0.0);

      PhysicalParams sum = p;
      for (int k = 0; k < 3; ++k) sum.j[k] = p.j[k] + q.j[k];
      sum.b1 = p.b1 + q.b1;
      sum.b2 = p.b2 + q.b2;
      CHECK(max_abs(build_hamiltonian(sum) - build_hamiltonian(p) - build_hamiltonian(q)) <= 1e-14);

      PhysicalParams scaled = p;
      for (double& j : scaled.j) j *= -1.75;
      scaled.b1 *= -1.75;
      scaled.b2 *= -1.75;
      CHECK(max_abs(build_hamiltonian(scaled) + 1.75 * build_hamiltonian(p)) <= 1e-14);
    }
  }
}

TEST_CASE("evolve at t = 0 is the identity") {
  std::mt19937_64 rng(9);
  PhysicalParams p = random_params(rng, 1);
  p.t = 0.0;
  CHECK(max_abs(evolve(p) - CMat4::Identity()) == 0.0);
}

TEST_CASE("uniform field evolution factorizes") {
  PhysicalParams p;
  p.h = 3;
  p.t = 0.9;
  p.b1 = p.b2 = 0.7;
  CMat2 single = CMat2::Zero();
  single(0, 0) = std::exp(kI * p.b1 * p.t);
  single(1, 1) = std::exp(-kI * p.b1 * p.t);
  CHECK(max_abs(evolve(p) - kron(single, single)) <= 1e-14);
}

TEST_CASE("evolution properties on random parameters") {
  std::mt19937_64 rng(21);
  for (int h = 1; h <= 3; ++h) {
    for (int trial = 0; trial < 100; ++trial) {
      PhysicalParams p = random_params(rng, h);
      const CMat4 u = evolve(p);
      CHECK(dist_unitary(u) <= 1e-12);

      const CMat4 hm = build_hamiltonian(p);
      CHECK(max_abs(hm * u - u * hm) <= 1e-11);

      PhysicalParams first = p, second = p, total = p;
      first.t = 0.4 * p.t;
      second.t = 0.6 * p.t;
      total.t = first.t + second.t;
      CHECK(max_abs(evolve(total) - evolve(first) * evolve(second)) <= 1e-11);
    }
  }
}
