#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "wt/cli.hpp"
#include "wt/error.hpp"

namespace {

struct Flags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string format;
};

int config_failure(const wt::Error& e) {
  std::cerr << wt::error_record(e, 2) << '\n';
  return 2;
}

int execute(const std::string& command, const Flags& flags) {
  wt::ExperimentConfig cfg;
  try {
    std::string text = "{}";
    std::string base_dir = ".";
    if (!flags.config.empty()) {
      text = wt::read_text_file(flags.config);
      base_dir = std::filesystem::path(flags.config).parent_path().string();
      if (base_dir.empty()) base_dir = ".";
    }
    wt::Json j;
    try {
      j = wt::Json::parse(text);
    } catch (const wt::Json::parse_error&) {
      cfg = wt::parse_config(text, base_dir);  // rethrows with line and column
    }
    if (!j.is_object()) throw wt::Error(wt::ErrorKind::validation_error, "config: must be a JSON object");
    if (!j.contains("command")) j["command"] = command;
    if (j["command"] != command) {
      throw wt::Error(wt::ErrorKind::validation_error, "command: config says " + j["command"].dump() +
                                                           " but the subcommand is " + command);
    }
    if (flags.seed) j["seed"] = *flags.seed;
    if (!flags.out.empty()) j["output"] = flags.out;
    if (!flags.format.empty()) j["format"] = flags.format;
    cfg = wt::parse_config(j.dump(), base_dir);
  } catch (const wt::Error& e) {
    return config_failure(e);
  }

  const wt::RunResult res = wt::run(cfg);
  if (res.exit_code != 0) {
    std::cerr << res.error << '\n';
    return res.exit_code;
  }
  try {
    if (cfg.output.empty()) {
      std::cout << res.report;
    } else {
      wt::write_text_file(cfg.output, res.report);
    }
  } catch (const wt::Error& e) {
    std::cerr << wt::error_record(e, 1) << '\n';
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite sections, lattice polygons and random operator experiments"};
  app.require_subcommand(1);
  Flags flags;
  std::string chosen;
  for (const char* name : {"symbol-analyze", "toeplitz-scan", "polygon-generate", "polygon-verify", "wegner-run",
                           "ids-run", "averaging-suite"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", flags.config, "JSON experiment config");
    sub->add_option("--seed", flags.seed, "64-bit seed, overrides the config");
    sub->add_option("--out", flags.out, "report path (default: standard output)");
    sub->add_option("--format", flags.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->callback([&chosen, name] { chosen = name; });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  return execute(chosen, flags);
}
