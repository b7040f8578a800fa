#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "bellgate/bell_frame.hpp"
#include "bellgate/calibration.hpp"
#include "bellgate/fidelity.hpp"
#include "bellgate/gates.hpp"
#include "bellgate/model.hpp"

namespace bellgate {

using Json = nlohmann::json;

/// %.17g formatting; non-finite values become "nan" / "inf" / "-inf".
std::string format_real(double x);

/// Pretty-printed JSON with every floating-point number at 17 significant
/// digits (JSON null for non-finite values).
std::string dump_json(const Json& j, int indent = 2);

Json complex_to_json(Complex z);
Complex complex_from_json(const Json& j);
/// Row-major nested arrays of {"re", "im"} objects.
Json matrix_to_json(const Eigen::MatrixXcd& m);
Eigen::MatrixXcd matrix_from_json(const Json& j);

Json to_json(const PhysicalParams& p);
/// Validates the result; throws std::invalid_argument on schema errors.
PhysicalParams params_from_json(const Json& j);

Json to_json(const BellFrame& f);
Json to_json(const ReducedBlockParams& rp);
Json to_json(const BlockDecomposition& d);

Json to_json(const GateId& g);
GateId gate_from_json(const Json& j);
Json to_json(const Circuit& c);
Circuit circuit_from_json(const Json& j);

Json to_json(const PrescriptionTargets& tg);
PrescriptionTargets targets_from_json(const Json& j);
Json to_json(const PrescriptionCard& card);
PrescriptionCard card_from_json(const Json& j);

Json to_json(const FidelityReport& r);
Json to_json(const SweepResult& r);
/// Columns: gate, phi, m, state_id, param, dp, f2_exact, f2_second_order, cubic_residual.
std::string sweep_csv(const SweepResult& r);

}  // namespace bellgate
