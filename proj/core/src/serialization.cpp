#include "bellgate/serialization.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace bellgate {

namespace {

void require(bool cond, const std::string& what) {
  if (!cond) throw std::invalid_argument(what);
}

double get_real(const Json& j, const char* key) {
  require(j.is_object() && j.contains(key), std::string("missing field '") + key + "'");
  require(j.at(key).is_number(), std::string("field '") + key + "' must be a number");
  return j.at(key).get<double>();
}

Json optional_real(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

std::optional<double> optional_real_from(const Json& j) {
  if (j.is_null()) return std::nullopt;
  require(j.is_number(), "expected a number or null");
  return j.get<double>();
}

void dump_impl(const Json& j, int indent, int depth, std::string& out) {
  const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
  const std::string close_pad(static_cast<std::size_t>(indent * depth), ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad;
        out += Json(it.key()).dump();
        out += ": ";
        dump_impl(it.value(), indent, depth + 1, out);
      }
      out += "\n" + close_pad + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      bool first = true;
      for (const Json& v : j) {
        if (!first) out += ",\n";
        first = false;
        out += pad;
        dump_impl(v, indent, depth + 1, out);
      }
      out += "\n" + close_pad + "]";
      return;
    }
    case Json::value_t::number_float: {
      const double x = j.get<double>();
      out += std::isfinite(x) ? format_real(x) : std::string("null");
      return;
    }
    default:
      out += j.dump();
      return;
  }
}

}  // namespace

std::string format_real(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  std::string s(buf);
  // Keep floats recognizable as floats when re-parsed.
  if (s.find_first_of(".eE") == std::string::npos) s += ".0";
  return s;
}

std::string dump_json(const Json& j, int indent) {
  std::string out;
  dump_impl(j, indent, 0, out);
  out += "\n";
  return out;
}

Json complex_to_json(Complex z) { return Json{{"re", z.real()}, {"im", z.imag()}}; }

Complex complex_from_json(const Json& j) { return {get_real(j, "re"), get_real(j, "im")}; }

Json matrix_to_json(const Eigen::MatrixXcd& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
    rows.push_back(row);
  }
  return rows;
}

Eigen::MatrixXcd matrix_from_json(const Json& j) {
  require(j.is_array() && !j.empty(), "matrix must be a non-empty array of rows");
  const auto n_rows = static_cast<Eigen::Index>(j.size());
  require(j[0].is_array(), "matrix rows must be arrays");
  const auto n_cols = static_cast<Eigen::Index>(j[0].size());
  Eigen::MatrixXcd m(n_rows, n_cols);
  for (Eigen::Index r = 0; r < n_rows; ++r) {
    const Json& row = j[static_cast<std::size_t>(r)];
    require(row.is_array() && static_cast<Eigen::Index>(row.size()) == n_cols, "ragged matrix");
    for (Eigen::Index c = 0; c < n_cols; ++c) m(r, c) = complex_from_json(row[static_cast<std::size_t>(c)]);
  }
  return m;
}

Json to_json(const PhysicalParams& p) {
  return Json{{"t", p.t}, {"J", {p.j[0], p.j[1], p.j[2]}}, {"B1", p.b1}, {"B2", p.b2}, {"h", p.h}};
}

PhysicalParams params_from_json(const Json& j) {
  require(j.is_object(), "params must be a JSON object");
  PhysicalParams p;
  p.t = get_real(j, "t");
  require(j.contains("J") && j.at("J").is_array() && j.at("J").size() == 3, "field 'J' must be an array of 3 numbers");
  for (std::size_t k = 0; k < 3; ++k) {
    require(j.at("J")[k].is_number(), "field 'J' must be an array of 3 numbers");
    p.j[k] = j.at("J")[k].get<double>();
  }
  p.b1 = get_real(j, "B1");
  p.b2 = get_real(j, "B2");
  require(j.contains("h") && j.at("h").is_number_integer(), "field 'h' must be an integer");
  p.h = j.at("h").get<int>();
  p.validate();
  return p;
}

Json to_json(const BellFrame& f) {
  Json pairing = Json::array();
  for (const auto& pair : f.pairing) pairing.push_back({std::string(bell_label_name(pair[0])), std::string(bell_label_name(pair[1]))});
  Json signs = Json::object();
  for (int k = 0; k < 2; ++k) {
    const BlockSigns& s = f.signs[static_cast<std::size_t>(k)];
    signs["block" + std::to_string(k + 1)] =
        Json{{"alpha", s.alpha}, {"beta", s.beta}, {"q", s.q}, {"rows", {s.k_row, s.l_row}}};
  }
  return Json{{"h", f.h}, {"pairing", pairing}, {"signs", signs}};
}

Json to_json(const ReducedBlockParams& rp) {
  return Json{{"block", rp.block_index},
              {"delta_plus", rp.delta_plus},
              {"delta_minus", rp.delta_minus},
              {"b", rp.b_red},
              {"j", rp.j_red}};
}

Json to_json(const BlockDecomposition& d) {
  return Json{{"blocks", {matrix_to_json(d.blocks[0]), matrix_to_json(d.blocks[1])}},
              {"offblock_norm", d.offblock_norm}};
}

Json to_json(const GateId& g) {
  Json j{{"gate", std::string(gate_tag_name(g.tag))}};
  if (g.phi && (g.tag == GateTag::kSPhiQ1 || g.tag == GateTag::kSPhiQ2)) j["phi"] = *g.phi;
  if (g.qubit) j["qubit"] = *g.qubit;
  return j;
}

GateId gate_from_json(const Json& j) {
  require(j.is_object() && j.contains("gate") && j.at("gate").is_string(), "gate entry needs a 'gate' name");
  const GateTag tag = gate_tag_from_name(j.at("gate").get<std::string>());
  std::optional<double> phi;
  std::optional<int> qubit;
  if (j.contains("phi") && !j.at("phi").is_null()) phi = get_real(j, "phi");
  if (j.contains("qubit")) {
    require(j.at("qubit").is_number_integer(), "field 'qubit' must be an integer");
    qubit = j.at("qubit").get<int>();
  }
  return GateId::make(tag, phi, qubit);
}

Json to_json(const Circuit& c) {
  Json gates = Json::array();
  for (const CircuitOp& op : c.ops) {
    Json g = to_json(op.gate);
    if (op.matrix) g["matrix"] = matrix_to_json(*op.matrix);
    gates.push_back(g);
  }
  return Json{{"basis", std::string(basis_name(c.basis))}, {"gates", gates}};
}

Circuit circuit_from_json(const Json& j) {
  Circuit c;
  const Json* gates = &j;
  if (j.is_object()) {
    require(j.contains("gates") && j.at("gates").is_array(), "circuit needs a 'gates' array");
    if (j.contains("basis")) {
      require(j.at("basis").is_string(), "field 'basis' must be a string");
      c.basis = basis_from_name(j.at("basis").get<std::string>());
    }
    gates = &j.at("gates");
  }
  require(gates->is_array(), "circuit must be a list of gates");
  for (const Json& g : *gates) {
    CircuitOp op;
    op.gate = gate_from_json(g);
    if (op.gate.tag == GateTag::kOpaque) {
      require(g.contains("matrix"), "opaque gate needs a 'matrix'");
      const Eigen::MatrixXcd m = matrix_from_json(g.at("matrix"));
      require(m.rows() == 4 && m.cols() == 4, "opaque matrix must be 4x4");
      op.matrix = CMat4(m);
    }
    c.ops.push_back(std::move(op));
  }
  return c;
}

Json to_json(const PrescriptionTargets& tg) {
  Json blocks = Json::array();
  for (const BlockTarget& bt : tg.blocks) {
    blocks.push_back(Json{{"delta_minus", optional_real(bt.delta_minus)},
                          {"b", optional_real(bt.b)},
                          {"j", optional_real(bt.j)},
                          {"b_relation", bt.b_relation ? Json(*bt.b_relation) : Json(nullptr)},
                          {"b_unit_limit", bt.b_unit_limit}});
  }
  Json j{{"h", tg.h},
         {"delta_plus_1", optional_real(tg.delta_plus_1)},
         {"blocks", blocks},
         {"m", tg.m},
         {"m_prime", tg.m_prime},
         {"alternative_route", tg.alternative_route}};
  return j;
}

PrescriptionTargets targets_from_json(const Json& j) {
  require(j.is_object(), "targets must be an object");
  PrescriptionTargets tg;
  tg.h = j.at("h").get<int>();
  tg.delta_plus_1 = optional_real_from(j.at("delta_plus_1"));
  require(j.at("blocks").is_array() && j.at("blocks").size() == 2, "targets need two blocks");
  for (std::size_t k = 0; k < 2; ++k) {
    const Json& b = j.at("blocks")[k];
    BlockTarget& bt = tg.blocks[k];
    bt.delta_minus = optional_real_from(b.at("delta_minus"));
    bt.b = optional_real_from(b.at("b"));
    bt.j = optional_real_from(b.at("j"));
    if (!b.at("b_relation").is_null()) bt.b_relation = b.at("b_relation").get<int>();
    bt.b_unit_limit = b.at("b_unit_limit").get<bool>();
  }
  tg.m = j.at("m").get<int>();
  tg.m_prime = j.at("m_prime").get<int>();
  tg.alternative_route = j.at("alternative_route").get<bool>();
  return tg;
}

Json to_json(const PrescriptionCard& card) {
  const PrescriptionTargets& tg = card.targets;
  Json j{{"gate", std::string(gate_tag_name(tg.gate.tag))},
         {"phi", tg.gate.phi ? Json(*tg.gate.phi) : Json(nullptr)},
         {"h", tg.h},
         {"m", tg.m},
         {"m_prime", tg.m_prime},
         {"targets", to_json(tg)},
         {"branch",
          {{"delta_plus", card.branch.delta_plus},
           {"delta_minus", {card.branch.delta_minus[0], card.branch.delta_minus[1]}},
           {"signs", {card.branch.signs[0], card.branch.signs[1]}},
           {"windings", {card.branch.windings[0], card.branch.windings[1]}}}},
         {"solved",
          {{"t", card.solved.t},
           {"J", {card.solved.j[0], card.solved.j[1], card.solved.j[2]}},
           {"B1", card.solved.b1},
           {"B2", card.solved.b2}}},
         {"residuals", card.residuals},
         {"realized_error", card.realized_error}};
  if (card.family) {
    j["family"] = {{"field_scale", card.family->field_scale},
                   {"kappa", card.family->kappa},
                   {"b_alpha", card.family->b_alpha}};
  }
  return j;
}

PrescriptionCard card_from_json(const Json& j) {
  require(j.is_object(), "card must be a JSON object");
  try {
    PrescriptionCard card;
    card.targets = targets_from_json(j.at("targets"));
    Json gate{{"gate", j.at("gate")}};
    if (!j.at("phi").is_null()) gate["phi"] = j.at("phi");
    card.targets.gate = gate_from_json(gate);
    require(j.at("h").get<int>() == card.targets.h, "card 'h' disagrees with its targets");
    const Json& br = j.at("branch");
    card.branch.delta_plus = br.at("delta_plus").get<double>();
    for (std::size_t k = 0; k < 2; ++k) {
      card.branch.delta_minus[k] = br.at("delta_minus")[k].get<double>();
      card.branch.signs[k] = br.at("signs")[k].get<int>();
      card.branch.windings[k] = br.at("windings")[k].get<int>();
    }
    Json solved = j.at("solved");
    solved["h"] = card.targets.h;
    card.solved = params_from_json(solved);
    card.residuals = j.at("residuals").get<std::vector<double>>();
    card.realized_error = j.at("realized_error").get<double>();
    if (j.contains("family")) {
      const Json& f = j.at("family");
      card.family = FamilyInfo{f.at("field_scale").get<double>(), f.at("kappa").get<double>(),
                               f.at("b_alpha").get<double>()};
    }
    return card;
  } catch (const Json::exception& e) {
    throw std::invalid_argument(std::string("malformed card: ") + e.what());
  }
}

Json to_json(const FidelityReport& r) {
  Json dp = Json::array();
  Json grad = Json::array();
  for (int i = 0; i < kNumParams; ++i) {
    dp.push_back(r.dp.dp(i));
    grad.push_back(r.per_parameter_gradient(i));
  }
  return Json{{"gate", std::string(gate_tag_name(r.gate.tag))},
              {"phi", r.gate.phi ? Json(*r.gate.phi) : Json(nullptr)},
              {"m", r.card.targets.m},
              {"state_id", r.state_id},
              {"param", r.param >= 0 ? Json(std::string(param_name(r.param))) : Json(nullptr)},
              {"dp", dp},
              {"f2_exact", r.f2_exact},
              {"f2_second_order", r.f2_second_order},
              {"per_parameter_gradient", grad},
              {"cubic_residual", r.cubic_residual}};
}

Json to_json(const SweepResult& r) {
  Json reports = Json::array();
  for (const FidelityReport& rep : r.reports) reports.push_back(to_json(rep));
  Json ranking = Json::array();
  for (const auto& [param, value] : r.ranking) ranking.push_back({{"param", std::string(param_name(param))}, {"sensitivity", value}});
  Json j{{"reports", reports}, {"ranking", ranking}};
  if (!r.reports.empty()) j["card"] = to_json(r.reports.front().card);
  return j;
}

std::string sweep_csv(const SweepResult& r) {
  std::ostringstream out;
  out << "gate,phi,m,state_id,param,dp,f2_exact,f2_second_order,cubic_residual\n";
  for (const FidelityReport& rep : r.reports) {
    const double step = rep.param >= 0 ? rep.dp.dp(rep.param) : rep.dp.dp.norm();
    out << gate_tag_name(rep.gate.tag) << ',' << (rep.gate.phi ? format_real(*rep.gate.phi) : std::string()) << ','
        << rep.card.targets.m << ',' << rep.state_id << ','
        << (rep.param >= 0 ? std::string(param_name(rep.param)) : std::string("dir")) << ',' << format_real(step)
        << ',' << format_real(rep.f2_exact) << ',' << format_real(rep.f2_second_order) << ','
        << format_real(rep.cubic_residual) << '\n';
  }
  return out.str();
}

}  // namespace bellgate
