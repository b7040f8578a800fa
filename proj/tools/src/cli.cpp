#include "bellgate/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bellgate/errors.hpp"
#include "bellgate/serialization.hpp"

namespace bellgate::cli {

namespace {

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NumericalFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Config {
  std::string format = "json";
  std::uint64_t seed = SolverOptions::kDefaultSeed;
  bool seed_set = false;
  double tol_structural = 1e-10;
  double tol_synthesis = tol::kSynthesis;
  std::string out_path;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json read_json(const std::string& path) {
  const std::string text = read_file(path);
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InputError("malformed JSON in '" + path + "': " + e.what());
  }
}

void require_format(const Config& cfg, std::initializer_list<const char*> allowed, const char* command) {
  for (const char* f : allowed) {
    if (cfg.format == f) return;
  }
  throw InputError(std::string("format '") + cfg.format + "' is not available for " + command);
}

int parse_int(const std::string& s, const char* what) {
  int value = 0;
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (ec != std::errc() || ptr != end) throw InputError(std::string("invalid ") + what + " '" + s + "'");
  return value;
}

// "4" or "1..8".
std::pair<int, int> parse_range(const std::string& s) {
  const auto dots = s.find("..");
  if (dots == std::string::npos) {
    const int v = parse_int(s, "winding");
    return {v, v};
  }
  const int lo = parse_int(s.substr(0, dots), "winding range");
  const int hi = parse_int(s.substr(dots + 2), "winding range");
  if (hi < lo) throw InputError("empty winding range '" + s + "'");
  return {lo, hi};
}

Json metadata(const char* command, const Config& cfg) {
  return Json{{"command", command}, {"version", "0.1.0"}, {"seed", cfg.seed}};
}

// ---------------------------------------------------------------- evolve

std::string cmd_evolve(const std::string& params_path, const Config& cfg) {
  require_format(cfg, {"json", "csv"}, "evolve");
  const PhysicalParams p = params_from_json(read_json(params_path));
  const CMat4 u = evolve(p);
  if (!all_finite(u)) throw NumericalFailure("evolution produced non-finite entries");
  const double residual = dist_unitary(u);

  if (cfg.format == "csv") {
    std::ostringstream out;
    out << "row,col,re,im\n";
    for (int r = 0; r < 4; ++r) {
      for (int c = 0; c < 4; ++c) {
        out << r << ',' << c << ',' << format_real(u(r, c).real()) << ',' << format_real(u(r, c).imag()) << '\n';
      }
    }
    return out.str();
  }
  Json meta = metadata("evolve", cfg);
  meta["params"] = to_json(p);
  meta["unitarity_residual"] = residual;
  meta["basis_order"] = "q1q2 -> 2*q1 + q2";
  return dump_json(Json{{"metadata", meta}, {"U", matrix_to_json(u)}});
}

// ---------------------------------------------------------------- blocks

std::string cmd_blocks(const std::string& params_path, std::optional<int> cross_h, const Config& cfg) {
  require_format(cfg, {"json", "csv"}, "blocks");
  const PhysicalParams p = params_from_json(read_json(params_path));
  if (cross_h && (*cross_h < 1 || *cross_h > 3)) throw InputError("--cross-h must be 1, 2 or 3");
  const BellFrame& frame = bell_frame(p.h);
  const CMat4 u = evolve(p);
  const BlockDecomposition dec = to_blocks(u, frame);
  const auto reduced = reduced_params(p, frame);

  std::array<double, 2> closed_residual{};
  for (std::size_t k = 0; k < 2; ++k) {
    closed_residual[k] = (closed_form_block(reduced[k], frame) - dec.blocks[k]).cwiseAbs().maxCoeff();
  }
  std::optional<double> cross_norm;
  if (cross_h) cross_norm = to_blocks(u, bell_frame(*cross_h)).offblock_norm;
  if (!std::isfinite(dec.offblock_norm)) throw NumericalFailure("non-finite off-block residual");

  std::string text;
  if (cfg.format == "csv") {
    std::ostringstream out;
    out << "block,labels,delta_plus,delta_minus,b,j,closed_form_residual,offblock_norm\n";
    for (std::size_t k = 0; k < 2; ++k) {
      const ReducedBlockParams& rp = reduced[k];
      out << k + 1 << ',' << bell_label_name(frame.pairing[k][0]) << '|' << bell_label_name(frame.pairing[k][1])
          << ',' << format_real(rp.delta_plus) << ',' << format_real(rp.delta_minus) << ',' << format_real(rp.b_red)
          << ',' << format_real(rp.j_red) << ',' << format_real(closed_residual[k]) << ','
          << format_real(dec.offblock_norm) << '\n';
    }
    if (cross_h) out << "# cross_h=" << *cross_h << " offblock_norm=" << format_real(*cross_norm) << '\n';
    text = out.str();
  } else {
    Json blocks = Json::array();
    for (std::size_t k = 0; k < 2; ++k) {
      blocks.push_back(Json{{"labels", to_json(frame)["pairing"][k]},
                            {"matrix", matrix_to_json(dec.blocks[k])},
                            {"reduced", to_json(reduced[k])},
                            {"closed_form_residual", closed_residual[k]}});
    }
    Json j{{"metadata", metadata("blocks", cfg)},
           {"params", to_json(p)},
           {"frame", to_json(frame)},
           {"blocks", blocks},
           {"offblock_norm", dec.offblock_norm},
           {"tol_structural", cfg.tol_structural}};
    if (cross_h) j["cross_h"] = Json{{"h", *cross_h}, {"offblock_norm", *cross_norm}};
    text = dump_json(j);
  }
  if (dec.offblock_norm > cfg.tol_structural) {
    throw NumericalFailure("off-block residual " + format_real(dec.offblock_norm) + " exceeds tol_structural");
  }
  return text;
}

// ---------------------------------------------------------------- synth

struct SynthArgs {
  std::string gate;
  std::optional<double> phi;
  std::string m = "1";
  int m_prime = 0;
  bool alternative = false;
  bool family = false;
  double field_scale = 6.0;
  double kappa = 1.0;
  int starts = 64;
};

std::string cmd_synth(const SynthArgs& a, const Config& cfg) {
  require_format(cfg, {"json", "csv"}, "synth");
  const GateId g = GateId::make(gate_tag_from_name(a.gate), a.phi, std::nullopt);
  const auto [m_lo, m_hi] = parse_range(a.m);

  if (a.family) {
    if (!is_cnot_tag(g.tag)) throw InputError("--family requires CNOT_12 or CNOT_21");
    std::vector<PrescriptionCard> cards;
    for (int m = m_lo; m <= m_hi; ++m) cards.push_back(cnot_family(g, m, a.field_scale, a.kappa));
    bool decreasing = true;
    for (std::size_t i = 1; i < cards.size(); ++i) {
      decreasing = decreasing && cards[i].realized_error < cards[i - 1].realized_error;
    }
    if (cfg.format == "csv") return family_csv(cards);
    Json members = Json::array();
    for (const auto& c : cards) members.push_back(to_json(c));
    return dump_json(Json{{"metadata", metadata("synth", cfg)},
                          {"family", members},
                          {"field_scale", a.field_scale},
                          {"kappa", a.kappa},
                          {"strictly_decreasing", decreasing}});
  }

  if (m_lo != m_hi) throw InputError("a winding range needs --family");
  SolverOptions opts;
  opts.seed = cfg.seed;
  opts.accept_tol = cfg.tol_synthesis;
  opts.starts = a.starts;
  if (a.starts < 1) throw InputError("--starts must be positive");
  const PrescriptionCard card = solve_physical(prescription_targets(g, m_lo, a.m_prime, a.alternative), opts);
  if (cfg.format == "csv") return family_csv({card});
  Json j = to_json(card);
  j["metadata"] = metadata("synth", cfg);
  return dump_json(j);
}

// ---------------------------------------------------------------- compile

std::string cmd_compile(const std::string& circuit_path, const Config& cfg) {
  require_format(cfg, {"json"}, "compile");
  const Circuit input = circuit_from_json(read_json(circuit_path));
  if (input.basis != Basis::kComputational) throw InputError("compile expects a computational-basis circuit");
  const Circuit compiled = compile(input);
  const double residual = dist_phase_invariant(matrix_of(compiled), matrix_of(input));
  return dump_json(Json{{"metadata", metadata("compile", cfg)},
                        {"input", to_json(input)},
                        {"compiled", to_json(compiled)},
                        {"equivalence_residual", residual}});
}

// ---------------------------------------------------------------- fidelity-sweep

std::vector<double> steps_from(const Json& j) {
  if (!j.is_array()) throw InputError("step lists must be arrays of numbers");
  std::vector<double> out;
  for (const Json& v : j) {
    if (!v.is_number()) throw InputError("step lists must be arrays of numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

std::string cmd_fidelity(const std::string& card_path, const std::string& config_path, const Config& cfg) {
  require_format(cfg, {"json", "csv"}, "fidelity-sweep");
  const PrescriptionCard card = card_from_json(read_json(card_path));

  int state_count = 64;
  std::uint64_t seed = cfg.seed;
  SweepGrid grid;
  for (auto& steps : grid) steps = {1e-3, 5e-4, 2.5e-4};

  if (!config_path.empty()) {
    const Json c = read_json(config_path);
    if (!c.is_object()) throw InputError("sweep config must be a JSON object");
    if (c.contains("states")) {
      if (!c.at("states").is_number_integer()) throw InputError("'states' must be an integer");
      state_count = c.at("states").get<int>();
    }
    if (c.contains("seed") && !cfg.seed_set) {
      if (!c.at("seed").is_number_unsigned()) throw InputError("'seed' must be a non-negative integer");
      seed = c.at("seed").get<std::uint64_t>();
    }
    if (c.contains("steps")) {
      const Json& s = c.at("steps");
      if (s.is_array()) {
        const auto steps = steps_from(s);
        for (auto& g : grid) g = steps;
      } else if (s.is_object()) {
        for (auto& g : grid) g.clear();
        for (auto it = s.begin(); it != s.end(); ++it) {
          grid[static_cast<std::size_t>(param_from_name(it.key()))] = steps_from(it.value());
        }
      } else {
        throw InputError("'steps' must be an array or an object keyed by parameter name");
      }
    }
  }
  if (state_count < 1) throw InputError("'states' must be positive");

  const auto states = sample_states(card.targets.h, state_count, seed);
  const SweepResult result = sensitivity_sweep(card, states, grid);
  if (cfg.format == "csv") return sweep_csv(result);
  Json j = to_json(result);
  Json meta = metadata("fidelity-sweep", cfg);
  meta["seed"] = seed;
  meta["states"] = state_count;
  j["metadata"] = meta;
  return dump_json(j);
}

void report_error(std::ostream& err, int code, const char* kind, const std::string& message) {
  err << Json{{"error", {{"exit_code", code}, {"kind", kind}, {"message", message}}}}.dump() << '\n';
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bell-basis gate toolkit for the two-qubit Heisenberg-Ising model", "bellgate"};
  app.require_subcommand(1);
  app.fallthrough();

  Config cfg;
  app.add_option("--format", cfg.format, "Output format (json or csv)")->check(CLI::IsMember({"json", "csv"}));
  auto* seed_opt = app.add_option("--seed", cfg.seed, "RNG seed for solver starts and state sampling");
  app.add_option("--tol-structural", cfg.tol_structural, "Off-block residual tolerance");
  app.add_option("--tol-synthesis", cfg.tol_synthesis, "Acceptance tolerance for synthesized gates");
  app.add_option("--out", cfg.out_path, "Write the result to this file instead of stdout");

  std::string path;
  std::optional<int> cross_h;
  auto* evolve_cmd = app.add_subcommand("evolve", "Print U(t) for a parameter file");
  evolve_cmd->add_option("params", path, "PhysicalParams JSON")->required();

  auto* blocks_cmd = app.add_subcommand("blocks", "Print the Bell-frame block decomposition");
  blocks_cmd->add_option("params", path, "PhysicalParams JSON")->required();
  blocks_cmd->add_option("--cross-h", cross_h, "Also report the off-block residual in another frame");

  SynthArgs synth;
  auto* synth_cmd = app.add_subcommand("synth", "Solve physical parameters for a Bell-label gate");
  synth_cmd->add_option("gate", synth.gate, "Gate name, e.g. S_phi_q2 or CNOT_12")->required();
  synth_cmd->add_option("--phi", synth.phi, "Phase angle in radians");
  synth_cmd->add_option("--m", synth.m, "CNOT winding m, or a range a..b with --family");
  synth_cmd->add_option("--m-prime", synth.m_prime, "CNOT winding m'");
  synth_cmd->add_flag("--alternative", synth.alternative, "Realize S_phi_q1 on the h = 3 frame");
  synth_cmd->add_flag("--family", synth.family, "Evaluate the finite-m CNOT family");
  synth_cmd->add_option("--field-scale", synth.field_scale, "Field dominance of the CNOT family");
  synth_cmd->add_option("--kappa", synth.kappa, "Residual exchange of the CNOT family");
  synth_cmd->add_option("--starts", synth.starts, "Solver starts per branch set");

  std::string config_path;
  auto* compile_cmd = app.add_subcommand("compile", "Compile a computational circuit into Bell-label gates");
  compile_cmd->add_option("circuit", path, "Circuit JSON")->required();

  auto* sweep_cmd = app.add_subcommand("fidelity-sweep", "Parameter sensitivity of a solved card");
  sweep_cmd->add_option("--card", path, "Card JSON from synth")->required();
  sweep_cmd->add_option("--config", config_path, "Sweep configuration JSON");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    report_error(err, kInputError, "usage", e.what());
    return kInputError;
  }
  cfg.seed_set = seed_opt->count() > 0;

  try {
    std::string text;
    if (evolve_cmd->parsed()) {
      text = cmd_evolve(path, cfg);
    } else if (blocks_cmd->parsed()) {
      text = cmd_blocks(path, cross_h, cfg);
    } else if (synth_cmd->parsed()) {
      text = cmd_synth(synth, cfg);
    } else if (compile_cmd->parsed()) {
      text = cmd_compile(path, cfg);
    } else {
      text = cmd_fidelity(path, config_path, cfg);
    }
    if (cfg.out_path.empty()) {
      out << text;
    } else {
      std::ofstream file(cfg.out_path, std::ios::binary);
      if (!file) throw InputError("cannot write '" + cfg.out_path + "'");
      file << text;
    }
    return kOk;
  } catch (const InputError& e) {
    report_error(err, kInputError, "input", e.what());
    return kInputError;
  } catch (const Json::exception& e) {
    report_error(err, kInputError, "input", e.what());
    return kInputError;
  } catch (const std::invalid_argument& e) {
    report_error(err, kInputError, "input", e.what());
    return kInputError;
  } catch (const SolverError& e) {
    report_error(err, kNumericalError, "solver", e.what());
    return kNumericalError;
  } catch (const InfeasibleError& e) {
    report_error(err, kNumericalError, "infeasible", e.what());
    return kNumericalError;
  } catch (const std::exception& e) {
    report_error(err, kNumericalError, "numerical", e.what());
    return kNumericalError;
  }
}

}  // namespace bellgate::cli
