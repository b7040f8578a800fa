#include "bellgate/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace bellgate {

namespace {

constexpr std::array<std::string_view, kNumParams> kParamNames{"t", "J1", "J2", "J3", "B1", "B2"};

void check_direction(int h) {
  if (h < 1 || h > 3) {
    throw std::invalid_argument("field direction h must be 1, 2 or 3 (got " + std::to_string(h) + ")");
  }
}

}  // namespace

std::string_view param_name(Param p) { return kParamNames[static_cast<std::size_t>(p)]; }

std::string_view param_name(int index) {
  if (index < 0 || index >= kNumParams) throw std::invalid_argument("parameter index out of range");
  return kParamNames[static_cast<std::size_t>(index)];
}

Param param_from_name(std::string_view name) {
  for (int i = 0; i < kNumParams; ++i) {
    if (kParamNames[static_cast<std::size_t>(i)] == name) return static_cast<Param>(i);
  }
  throw std::invalid_argument("unknown parameter name '" + std::string(name) + "'");
}

void PhysicalParams::validate() const {
  check_direction(h);
  if (!as_vector().allFinite()) throw std::invalid_argument("physical parameters must be finite");
  if (t < 0.0) throw std::invalid_argument("evolution time t must be non-negative");
}

ParamVector PhysicalParams::as_vector() const {
  ParamVector v;
  v << t, j[0], j[1], j[2], b1, b2;
  return v;
}

PhysicalParams PhysicalParams::from_vector(const ParamVector& v, int h) {
  PhysicalParams p;
  p.t = v(0);
  p.j = {v(1), v(2), v(3)};
  p.b1 = v(4);
  p.b2 = v(5);
  p.h = h;
  return p;
}

CMat4 build_hamiltonian(const PhysicalParams& p) {
  check_direction(p.h);
  const CMat2 id = CMat2::Identity();
  CMat4 hm = CMat4::Zero();
  for (int k = 1; k <= 3; ++k) {
    const CMat2 s = pauli(k);
    hm += p.j[static_cast<std::size_t>(k - 1)] * kron(s, s);
  }
  const CMat2 field = pauli(p.h);
  hm -= p.b1 * kron(field, id);
  hm -= p.b2 * kron(id, field);
  return hm;
}

CMat4 evolve(const PhysicalParams& p) {
  p.validate();
  return evolve_unchecked(p);
}

CMat4 evolve_unchecked(const PhysicalParams& p) {
  if (p.t == 0.0) return CMat4::Identity();
  return expm_hermitian(build_hamiltonian(p), p.t);
}

}  // namespace bellgate
