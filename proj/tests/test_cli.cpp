#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "wt/cli.hpp"
#include "wt/error.hpp"

using namespace wt;

namespace {

std::string validation_message(const std::string& text) {
  try {
    parse_config(text);
  } catch (const Error& e) {
    return e.message();
  }
  return "";
}

struct Proc {
  int code = 0;
  std::string out;
  std::string err;
};

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path scratch() {
  auto d = std::filesystem::temp_directory_path() / "wt_cli_test";
  std::filesystem::create_directories(d);
  return d;
}

Proc run_cli(const std::string& args) {
  const auto d = scratch();
  const std::string cmd = std::string(WT_CLI_PATH) + " " + args + " > " + (d / "out").string() + " 2> " +
                          (d / "err").string();
  const int status = std::system(cmd.c_str());
  return {WEXITSTATUS(status), slurp(d / "out"), slurp(d / "err")};
}

std::string write_config(const std::string& name, const std::string& text) {
  const auto p = scratch() / name;
  std::ofstream(p) << text;
  return p.string();
}

}  // namespace

TEST_CASE("config defaults are materialized") {
  const auto c = parse_config(R"({"command": "wegner-run", "seed": 7})");
  CHECK(c.ls == std::vector<int>{16});
  CHECK(c.eps == std::vector<double>{0.05, 0.1, 0.2, 0.4});
  CHECK(c.samples == 2000);
  const Json j = config_to_json(c);
  CHECK(j["seed"] == 7);
  CHECK(j.contains("vector"));
  CHECK(j.contains("density"));
  CHECK(config_to_json(parse_config(j.dump())).dump() == j.dump());

  const auto s = parse_config(R"({"command": "symbol-analyze", "seed": 1, "vector": {"dim": 2, "entries": [[0, 0, 1]]}})");
  CHECK(s.grid == 128);
  const auto pv = parse_config(R"({"command": "polygon-verify", "seed": 1})");
  CHECK(pv.big_r == 2.0);
  CHECK(pv.polygon->vertices.size() == 32);
}

TEST_CASE("config validation") {
  CHECK(validation_message(R"({"command": "averaging-suite"})").rfind("seed", 0) == 0);
  CHECK(validation_message(R"({"command": "averaging-suite", "seed": -1})").rfind("seed", 0) == 0);
  CHECK(validation_message(R"({"command": "wegner-run", "seed": 1, "l": [2]})").rfind("l:", 0) == 0);
  CHECK(validation_message(R"({"command": "wegner-run", "seed": 1, "samples": 0})").rfind("samples", 0) == 0);
  CHECK(validation_message(R"({"command": "ids-run", "seed": 1, "l": 60, "vector": {"dim": 2, "entries": [[0, 0, 1]]}})")
            .rfind("l:", 0) == 0);
  CHECK(validation_message(R"({"command": "wegner-run", "seed": 1, "trials": 3})").rfind("trials", 0) == 0);
  CHECK(validation_message(R"({"command": "symbol-analyze", "seed": 1, "vector": {"dim": 1, "entries": [[0, 1]]}, "grid": 4})")
            .rfind("grid", 0) == 0);
  CHECK(validation_message(R"({"command": "symbol-analyze", "seed": 1})").rfind("vector", 0) == 0);
  CHECK(validation_message(R"({"command": "bogus", "seed": 1})").rfind("command", 0) == 0);
  CHECK(validation_message(R"({"command": "wegner-run", "seed": 1, "density": [{"interval": [0, 1], "coeffs": [2]}]})")
            .rfind("density", 0) == 0);
  const auto msg = validation_message("{\n  \"seed\": ,\n}");
  CHECK(msg.find("line 2, column 11") != std::string::npos);
  try {
    parse_config("{");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::parse_error);
  }
}

TEST_CASE("input paths are inlined") {
  write_config("vec.json", R"({"dim": 1, "entries": [[0, 1], [1, -1]]})");
  const auto c = parse_config(R"({"command": "symbol-analyze", "seed": 1, "vector": "vec.json"})", scratch().string());
  CHECK(config_to_json(c)["vector"]["dim"] == 1);
  CHECK(validation_message(R"({"command": "symbol-analyze", "seed": 1, "vector": "missing.json"})").rfind("vector", 0) ==
        0);
}

TEST_CASE("run renders reports") {
  auto c = parse_config(R"({"command": "symbol-analyze", "seed": 1, "vector": {"dim": 1, "entries": [[0, 1], [1, -1]]}})");
  auto r = run(c);
  CHECK(r.exit_code == 0);
  CHECK(r.report.rfind("# artifact_version=0.1.0\n# config=", 0) == 0);
  CHECK(r.report.find("winding_1,undefined\n") != std::string::npos);
  c.format = OutputFormat::json;
  r = run(c);
  const Json j = Json::parse(r.report);
  CHECK(j["artifact_version"] == "0.1.0");
  CHECK(j["result"]["min_abs"] == 0.0);

  c = parse_config(R"({"command": "toeplitz-scan", "seed": 1, "family": "quarter-square", "n_from": 25, "n_to": 25,
                       "vector": {"dim": 2, "entries": [[2, -2, 16], [1, -1, -36], [-1, 1, 27]]}})");
  r = run(c);
  CHECK(r.exit_code == 0);
  CHECK(r.report.find("676,25,inf,inf,singular-section") != std::string::npos);

  c = parse_config(R"({"command": "symbol-analyze", "seed": 1, "vector": {"dim": 1, "entries": [[0, 1], [3, 1]]}})");
  r = run(c);
  CHECK(r.exit_code == 0);
}

TEST_CASE("reruns are byte identical") {
  const auto c = parse_config(R"({"command": "wegner-run", "seed": 99, "l": [8, 12], "eps": [0.1, 0.2], "samples": 30})");
  const auto a = run(c), b = run(c);
  CHECK(a.exit_code == 0);
  CHECK(a.report == b.report);
  const auto c2 = parse_config(R"({"command": "wegner-run", "seed": 100, "l": [8, 12], "eps": [0.1, 0.2], "samples": 30})");
  CHECK(run(c2).report != a.report);
  const auto ids = parse_config(R"({"command": "ids-run", "seed": 3, "l": 8, "samples": 5, "E_points": 11})");
  CHECK(run(ids).report == run(ids).report);
  CHECK(run(ids).report.find("E,N,stderr,samples,l,seed") != std::string::npos);
}

TEST_CASE("binary exit codes") {
  auto p = run_cli("polygon-generate --seed 1");
  CHECK(p.code == 0);
  CHECK(p.out.find("# artifact_version=0.1.0") == 0);

  p = run_cli("averaging-suite");
  CHECK(p.code == 2);
  CHECK(Json::parse(p.err)["error"] == "validation-error");

  const auto bad = write_config("bad.json", "{\n  \"seed\": ,\n}");
  p = run_cli("wegner-run --config " + bad);
  CHECK(p.code == 2);
  CHECK(p.err.find("line 2, column 11") != std::string::npos);

  const auto mism = write_config("mism.json", R"({"command": "ids-run", "seed": 1})");
  CHECK(run_cli("wegner-run --config " + mism).code == 2);

  const auto small = write_config("small.json", R"({"seed": 1, "l": [2]})");
  p = run_cli("wegner-run --config " + small);
  CHECK(p.code == 2);
  CHECK(Json::parse(p.err)["message"].get<std::string>().rfind("l:", 0) == 0);

  const auto vanish = write_config("vanish.json", R"({"seed": 1, "family": "cube", "n_from": 2, "n_to": 3,
      "vector": {"dim": 1, "entries": [[0, 1], [1, -1]]}})");
  p = run_cli("toeplitz-scan --config " + vanish);
  CHECK(p.code == 0);

  CHECK(run_cli("polygon-generate --seed 1 --out /nonexistent-dir/x.csv").code == 1);

  const auto out = (scratch() / "report.json").string();
  p = run_cli("polygon-verify --seed 5 --format json --out " + out);
  CHECK(p.code == 0);
  const Json j = Json::parse(slurp(out));
  CHECK(j["config"]["seed"] == 5);
  CHECK(j["result"]["cond_i"] == true);
  CHECK(j["result"]["cond_ii"] == true);
}
