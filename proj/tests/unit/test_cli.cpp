#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "bellgate/cli.hpp"
#include "bellgate/serialization.hpp"

using namespace bellgate;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string data(const std::string& name) { return std::string(BELLGATE_TEST_DATA_DIR) + "/" + name; }

}  // namespace

TEST_CASE("evolve") {
  const Result r = invoke({"evolve", data("params_identity.json")});
  REQUIRE(r.code == 0);
  const Json j = Json::parse(r.out);
  const Eigen::MatrixXcd u = matrix_from_json(j.at("U"));
  CHECK(u == Eigen::MatrixXcd(CMat4::Identity()));
  CHECK(j.at("metadata").at("unitarity_residual") == 0.0);

  const Result lib = invoke({"evolve", data("params_h2.json")});
  const PhysicalParams p = params_from_json(Json::parse(R"({"t":0.7,"J":[0.3,-0.2,0.5],"B1":0.4,"B2":-0.1,"h":2})"));
  CHECK(matrix_from_json(Json::parse(lib.out).at("U")) == Eigen::MatrixXcd(evolve(p)));

  const Result csv = invoke({"evolve", data("params_h2.json"), "--format", "csv"});
  REQUIRE(csv.code == 0);
  CHECK(std::count(csv.out.begin(), csv.out.end(), '\n') == 17);
  CHECK(csv.out.rfind("row,col,re,im\n", 0) == 0);
}

TEST_CASE("blocks") {
  const Result r = invoke({"blocks", data("params_h2.json"), "--cross-h", "3"});
  REQUIRE(r.code == 0);
  const Json j = Json::parse(r.out);
  CHECK(j.at("offblock_norm").get<double>() <= 1e-10);
  CHECK(j.at("cross_h").at("offblock_norm").get<double>() > 1e-3);
  CHECK(j.at("frame").at("h") == 2);

  const Result d = invoke({"blocks", data("params_h3_degenerate.json")});
  REQUIRE(d.code == 0);
  const Json reduced = Json::parse(d.out).at("blocks")[0].at("reduced");
  CHECK(reduced.at("delta_minus") == 0.0);
  CHECK(reduced.at("b") == 0.0);
  CHECK(reduced.at("j") == 1.0);

  CHECK(invoke({"blocks", data("params_h2.json"), "--tol-structural", "-1"}).code == 3);
  CHECK(invoke({"blocks", data("params_h2.json"), "--cross-h", "5"}).code == 2);
}

TEST_CASE("synth") {
  const Result r = invoke({"synth", "S_phi_q2", "--phi", "0.3927"});
  REQUIRE(r.code == 0);
  const Json j = Json::parse(r.out);
  CHECK(j.at("realized_error").get<double>() <= 1e-8);
  CHECK(j.at("gate") == "S_phi_q2");

  const Result h = invoke({"synth", "H_q1"});
  REQUIRE(h.code == 0);
  CHECK(Json::parse(h.out).at("h") == 3);

  const Result fam = invoke({"synth", "CNOT_12", "--m", "1..8", "--family", "--format", "csv"});
  REQUIRE(fam.code == 0);
  std::istringstream lines(fam.out);
  std::string line;
  std::getline(lines, line);
  double previous = 1.0;
  int rows = 0;
  while (std::getline(lines, line)) {
    const double err = std::stod(line.substr(line.rfind(',') + 1));
    CHECK(err < previous);
    previous = err;
    ++rows;
  }
  CHECK(rows == 8);

  const Result famjson = invoke({"synth", "CNOT_21", "--m", "2..6", "--family"});
  REQUIRE(famjson.code == 0);
  CHECK(Json::parse(famjson.out).at("strictly_decreasing") == true);

  CHECK(invoke({"synth", "S_phi_q2"}).code == 2);
  CHECK(invoke({"synth", "B_H"}).code == 2);
  CHECK(invoke({"synth", "H_q1", "--family"}).code == 2);
  CHECK(invoke({"synth", "CNOT_12", "--m", "1..3"}).code == 2);
  CHECK(invoke({"synth", "CNOT_12", "--m", "x"}).code == 2);
  CHECK(invoke({"synth", "H_q1", "--tol-synthesis", "-1"}).code == 3);
}

TEST_CASE("compile") {
  const Result r = invoke({"compile", data("circuit.json")});
  REQUIRE(r.code == 0);
  const Json j = Json::parse(r.out);
  CHECK(j.at("equivalence_residual").get<double>() <= 1e-9);
  const Json& gates = j.at("compiled").at("gates");
  CHECK(gates.size() == 8);
  CHECK(gates.front().at("gate") == "T_translator");
  CHECK(gates.back().at("gate") == "T_translator");
  CHECK(invoke({"compile", data("circuit.json"), "--format", "csv"}).code == 2);
}

TEST_CASE("fidelity-sweep") {
  const Result r = invoke({"fidelity-sweep", "--card", data("card_h_q1.json"), "--config", data("sweep.json"),
                           "--format", "csv"});
  REQUIRE(r.code == 0);
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 1 + 8 * 6 * 2);
  const Result j = invoke({"fidelity-sweep", "--card", data("card_h_q1.json"), "--config", data("sweep.json")});
  REQUIRE(j.code == 0);
  CHECK(Json::parse(j.out).at("ranking").size() == 6);
  CHECK(invoke({"fidelity-sweep", "--card", data("params_h2.json")}).code == 2);
}

TEST_CASE("errors are machine readable") {
  const Result missing = invoke({"evolve", data("does_not_exist.json")});
  CHECK(missing.code == 2);
  const Json e = Json::parse(missing.err);
  CHECK(e.at("error").at("exit_code") == 2);
  CHECK(invoke({"evolve", data("params_malformed.json")}).code == 2);
  CHECK(invoke({"evolve", data("circuit.json")}).code == 2);
  CHECK(invoke({"frobnicate"}).code == 2);
  CHECK(invoke({}).code == 2);
  CHECK(invoke({"--help"}).code == 0);
}

TEST_CASE("output file and determinism") {
  const std::string path = (std::filesystem::temp_directory_path() / "bellgate_cli_out_test.json").string();
  REQUIRE(invoke({"synth", "H_q2", "--out", path}).code == 0);
  const Result direct = invoke({"synth", "H_q2"});
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str() == direct.out);
  std::remove(path.c_str());
  CHECK(invoke({"synth", "H_q2", "--seed", "5"}).out == invoke({"synth", "H_q2", "--seed", "5"}).out);
}
