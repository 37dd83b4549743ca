#include "wt/cli.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <set>
#include <sstream>

#include "wt/anderson.hpp"
#include "wt/format.hpp"
#include "wt/toeplitz.hpp"
#include "wt/wegner.hpp"

namespace wt {

namespace {

constexpr std::array<std::pair<Command, std::string_view>, 7> kCommands{{
    {Command::symbol_analyze, "symbol-analyze"},
    {Command::toeplitz_scan, "toeplitz-scan"},
    {Command::polygon_generate, "polygon-generate"},
    {Command::polygon_verify, "polygon-verify"},
    {Command::wegner_run, "wegner-run"},
    {Command::ids_run, "ids-run"},
    {Command::averaging_suite, "averaging-suite"},
}};

[[noreturn]] void invalid(const std::string& field, const std::string& why) {
  throw Error(ErrorKind::validation_error, field + ": " + why);
}

const std::set<std::string>& allowed_keys(Command c) {
  static const std::set<std::string> symbol{"vector", "grid"};
  static const std::set<std::string> toeplitz{"vector", "family", "n_from", "n_to", "q", "scales"};
  static const std::set<std::string> pgen{"q"};
  static const std::set<std::string> pver{"polygon", "q", "r", "R"};
  static const std::set<std::string> wegner{"vector", "density", "l", "eps", "E", "samples"};
  static const std::set<std::string> ids{"vector", "density", "l", "E_min", "E_max", "E_points", "samples"};
  static const std::set<std::string> suite{"trials"};
  switch (c) {
    case Command::symbol_analyze: return symbol;
    case Command::toeplitz_scan: return toeplitz;
    case Command::polygon_generate: return pgen;
    case Command::polygon_verify: return pver;
    case Command::wegner_run: return wegner;
    case Command::ids_run: return ids;
    case Command::averaging_suite: return suite;
  }
  return suite;
}

std::int64_t get_int(const Json& j, const std::string& key, std::int64_t fallback, std::int64_t min) {
  if (!j.contains(key)) return fallback;
  const Json& v = j.at(key);
  if (!v.is_number_integer()) invalid(key, "must be an integer");
  const auto x = v.get<std::int64_t>();
  if (x < min) invalid(key, "must be at least " + std::to_string(min));
  return x;
}

double get_double(const Json& j, const std::string& key, double fallback) {
  if (!j.contains(key)) return fallback;
  const Json& v = j.at(key);
  if (!v.is_number() || !std::isfinite(v.get<double>())) invalid(key, "must be a finite number");
  return v.get<double>();
}

// A scalar is accepted as a one-element list.
template <class T>
std::vector<T> get_list(const Json& j, const std::string& key, std::vector<T> fallback) {
  if (!j.contains(key)) return fallback;
  Json v = j.at(key);
  if (!v.is_array()) v = Json::array({v});
  if (v.empty()) invalid(key, "must not be empty");
  std::vector<T> out;
  for (const auto& x : v) {
    if constexpr (std::is_integral_v<T>) {
      if (!x.is_number_integer()) invalid(key, "entries must be integers");
    } else {
      if (!x.is_number() || !std::isfinite(x.get<double>())) invalid(key, "entries must be finite numbers");
    }
    out.push_back(x.get<T>());
  }
  return out;
}

// Inline JSON value, or a string naming a JSON file relative to base_dir.
Json load_input(const Json& v, const std::string& key, const std::string& base_dir) {
  if (!v.is_string()) return v;
  std::filesystem::path p(v.get<std::string>());
  if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
  std::string text;
  try {
    text = read_text_file(p.string());
  } catch (const Error& e) {
    invalid(key, e.what());
  }
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    invalid(key, std::string("file is not valid JSON: ") + e.what());
  }
}

template <class F>
auto with_field(const std::string& key, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::validation_error) throw;
    invalid(key, e.what());
  }
}

ConvolutionVector default_vector() { return ConvolutionVector(1, {{{0}, 1.0}, {{1}, -1.0}}); }

std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace

std::string_view to_string(Command c) noexcept {
  for (const auto& [cmd, name] : kCommands) {
    if (cmd == c) return name;
  }
  return "?";
}

std::optional<Command> command_from_string(std::string_view s) noexcept {
  for (const auto& [cmd, name] : kCommands) {
    if (name == s) return cmd;
  }
  return std::nullopt;
}

ExperimentConfig parse_config(const std::string& text, const std::string& base_dir) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    const auto [line, col] = line_column(text, e.byte);
    throw Error(ErrorKind::parse_error,
                "line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + e.what());
  }
  if (!j.is_object()) invalid("config", "must be a JSON object");

  ExperimentConfig c;
  if (!j.contains("command") || !j.at("command").is_string()) invalid("command", "required string");
  const auto cmd = command_from_string(j.at("command").get<std::string>());
  if (!cmd) invalid("command", "unknown command " + j.at("command").get<std::string>());
  c.command = *cmd;

  const std::set<std::string> common{"command", "seed", "output", "format"};
  const auto& allowed = allowed_keys(c.command);
  for (const auto& [key, value] : j.items()) {
    if (!common.count(key) && !allowed.count(key)) invalid(key, "unknown key for " + std::string(to_string(c.command)));
  }

  if (!j.contains("seed")) invalid("seed", "required");
  if (!j.at("seed").is_number_unsigned()) invalid("seed", "must be a nonnegative 64-bit integer");
  c.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("output")) {
    if (!j.at("output").is_string()) invalid("output", "must be a string");
    c.output = j.at("output").get<std::string>();
  }
  if (j.contains("format")) {
    const Json& f = j.at("format");
    if (f == "csv") {
      c.format = OutputFormat::csv;
    } else if (f == "json") {
      c.format = OutputFormat::json;
    } else {
      invalid("format", "must be csv or json");
    }
  }

  const bool needs_vector = c.command == Command::symbol_analyze || c.command == Command::toeplitz_scan;
  if (allowed.count("vector")) {
    if (j.contains("vector")) {
      c.vector = with_field("vector", [&] { return vector_from_json(load_input(j.at("vector"), "vector", base_dir)); });
    } else if (needs_vector) {
      invalid("vector", "required");
    } else {
      c.vector = default_vector();
    }
  }
  if (allowed.count("density")) {
    const Json dj = j.contains("density") ? load_input(j.at("density"), "density", base_dir)
                                          : to_json(DensitySpec::uniform(1.0).function());
    c.density = with_field("density", [&] { return density_from_json(dj).function(); });
  }

  switch (c.command) {
    case Command::symbol_analyze:
      c.grid = static_cast<std::size_t>(get_int(j, "grid", static_cast<std::int64_t>(default_grid(c.vector->dim())), 8));
      break;
    case Command::toeplitz_scan: {
      c.family = j.value("family", std::string("cube"));
      if (c.family == "polygon") {
        for (const char* k : {"n_from", "n_to"}) {
          if (j.contains(k)) invalid(k, "not used by family polygon");
        }
        c.q = static_cast<int>(get_int(j, "q", 3, 1));
        c.scales = get_list<int>(j, "scales", c.scales);
        for (int s : c.scales) {
          if (s < 1) invalid("scales", "entries must be at least 1");
        }
        if (c.vector->dim() != 2) invalid("vector", "family polygon needs d = 2");
      } else if (c.family == "cube" || c.family == "quarter-square") {
        for (const char* k : {"q", "scales"}) {
          if (j.contains(k)) invalid(k, "not used by family " + c.family);
        }
        c.n_from = static_cast<int>(get_int(j, "n_from", 2, 1));
        c.n_to = static_cast<int>(get_int(j, "n_to", 16, c.n_from));
        if (c.family == "quarter-square" && c.vector->dim() != 2) invalid("vector", "family quarter-square needs d = 2");
      } else {
        invalid("family", "must be cube, quarter-square or polygon");
      }
      break;
    }
    case Command::polygon_generate:
      c.q = static_cast<int>(get_int(j, "q", 3, 1));
      break;
    case Command::polygon_verify:
      if (j.contains("polygon")) {
        if (j.contains("q")) invalid("q", "conflicts with polygon");
        c.polygon = with_field("polygon", [&] { return polygon_from_json(load_input(j.at("polygon"), "polygon", base_dir)); });
      } else {
        c.q = static_cast<int>(get_int(j, "q", 3, 1));
        c.polygon = complete_polygon(build_walk(c.q));
      }
      c.r = get_double(j, "r", 1.4);
      c.big_r = get_double(j, "R", 2.0);
      if (!(c.r > 0.0)) invalid("r", "must be positive");
      if (!(c.big_r > 0.0)) invalid("R", "must be positive");
      break;
    case Command::wegner_run:
    case Command::ids_run: {
      c.dim = c.vector->dim();
      if (c.dim != 1 && c.dim != 2) invalid("vector", "d must be 1 or 2");
      if (c.command == Command::wegner_run) {
        c.ls = get_list<int>(j, "l", c.ls);
        c.eps = get_list<double>(j, "eps", c.eps);
        for (double x : c.eps) {
          if (x < 0.0) invalid("eps", "entries must be nonnegative");
        }
        c.e = get_double(j, "E", 0.0);
        c.samples = static_cast<std::size_t>(get_int(j, "samples", 2000, 1));
      } else {
        c.ls = {static_cast<int>(get_int(j, "l", 16, 3))};
        c.e_min = get_double(j, "E_min", -4.0);
        c.e_max = get_double(j, "E_max", 4.0);
        c.e_points = static_cast<std::size_t>(get_int(j, "E_points", 81, 2));
        if (!(c.e_max > c.e_min)) invalid("E_max", "must exceed E_min");
        c.samples = static_cast<std::size_t>(get_int(j, "samples", 100, 1));
      }
      for (int l : c.ls) {
        if (l < 3) invalid("l", "must be at least 3");
        if (torus_volume(l, c.dim) > 2500) invalid("l", "l^d must not exceed 2500 (dense eigensolver limit)");
      }
      break;
    }
    case Command::averaging_suite:
      c.trials = static_cast<std::size_t>(get_int(j, "trials", 50, 1));
      break;
  }
  return c;
}

Json config_to_json(const ExperimentConfig& c) {
  Json j;
  j["command"] = to_string(c.command);
  j["seed"] = c.seed;
  j["output"] = c.output;
  j["format"] = c.format == OutputFormat::csv ? "csv" : "json";
  switch (c.command) {
    case Command::symbol_analyze:
      j["vector"] = to_json(*c.vector);
      j["grid"] = c.grid;
      break;
    case Command::toeplitz_scan:
      j["vector"] = to_json(*c.vector);
      j["family"] = c.family;
      if (c.family == "polygon") {
        j["q"] = c.q;
        j["scales"] = c.scales;
      } else {
        j["n_from"] = c.n_from;
        j["n_to"] = c.n_to;
      }
      break;
    case Command::polygon_generate:
      j["q"] = c.q;
      break;
    case Command::polygon_verify:
      j["polygon"] = to_json(*c.polygon);
      j["r"] = c.r;
      j["R"] = c.big_r;
      break;
    case Command::wegner_run:
      j["vector"] = to_json(*c.vector);
      j["density"] = to_json(*c.density);
      j["l"] = c.ls;
      j["eps"] = c.eps;
      j["E"] = c.e;
      j["samples"] = c.samples;
      break;
    case Command::ids_run:
      j["vector"] = to_json(*c.vector);
      j["density"] = to_json(*c.density);
      j["l"] = c.ls.front();
      j["E_min"] = c.e_min;
      j["E_max"] = c.e_max;
      j["E_points"] = c.e_points;
      j["samples"] = c.samples;
      break;
    case Command::averaging_suite:
      j["trials"] = c.trials;
      break;
  }
  return j;
}

std::string error_record(const Error& e, int exit_code) {
  return Json{{"error", to_string(e.kind())}, {"message", e.message()}, {"exit_code", exit_code}}.dump();
}

namespace {

std::string csv_preamble(const ExperimentConfig& c, const std::vector<std::string>& extra = {}) {
  std::string out = "# artifact_version=" + std::string(kArtifactVersion) + "\n";
  out += "# config=" + config_to_json(c).dump() + "\n";
  for (const auto& line : extra) out += "# " + line + "\n";
  return out;
}

std::string json_report(const ExperimentConfig& c, Json result) {
  Json j;
  j["artifact_version"] = kArtifactVersion;
  j["config"] = config_to_json(c);
  j["result"] = std::move(result);
  return j.dump(2) + "\n";
}

std::string join_doubles(const std::vector<double>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? " " : "") + format_double(xs[i]);
  return s;
}

std::string run_symbol(const ExperimentConfig& c) {
  const SymbolReport r = analyze_symbol(*c.vector, c.grid);
  if (c.format == OutputFormat::json) return json_report(c, to_json(r));
  std::string out = csv_preamble(c) + "key,value\n";
  auto row = [&](const std::string& k, const std::string& v) { out += k + "," + v + "\n"; };
  row("dim", std::to_string(r.dim));
  row("grid", std::to_string(r.grid));
  row("min_abs", format_double(r.min_abs));
  row("argmin", join_doubles(r.argmin));
  for (std::size_t i = 0; i < r.winding.size(); ++i) {
    row("winding_" + std::to_string(i + 1), r.winding[i] ? std::to_string(*r.winding[i]) : "undefined");
  }
  row("sectorial_phase", r.sectorial_phase ? format_double(*r.sectorial_phase) : "none");
  row("zeros_non_isolated", r.zeros_non_isolated ? "true" : "false");
  row("zero_count", std::to_string(r.real_zeros.size()));
  for (std::size_t i = 0; i < r.real_zeros.size(); ++i) {
    row("zero_" + std::to_string(i + 1) + "_location", join_doubles(r.real_zeros[i].location));
    row("zero_" + std::to_string(i + 1) + "_order", std::to_string(r.real_zeros[i].order));
  }
  row("separation_radius", format_double(r.separation_radius));
  return out;
}

std::string run_toeplitz(const ExperimentConfig& c) {
  std::vector<IndexSet> family;
  std::vector<std::string> labels;
  if (c.family == "polygon") {
    const LatticePolygon poly = complete_polygon(build_walk(c.q));
    for (int s : c.scales) {
      family.push_back(polygon_lattice_points(poly, s));
      labels.push_back("q" + std::to_string(c.q) + "s" + std::to_string(s));
    }
  } else {
    for (int n = c.n_from; n <= c.n_to; ++n) {
      family.push_back(c.family == "cube" ? IndexSet::cube(c.vector->dim(), n) : IndexSet::quarter_square(n));
      labels.push_back(std::to_string(n));
    }
  }
  const auto rows = stability_scan(*c.vector, family, labels);
  if (c.format == OutputFormat::csv) return csv_preamble(c) + stability_csv(rows);
  Json arr = Json::array();
  for (const auto& r : rows) {
    arr.push_back({{"N", r.n},
                   {"n_label", r.label},
                   {"inv_norm_l1", number_json(r.inv_norm_l1)},
                   {"inv_norm_l2", number_json(r.inv_norm_l2)},
                   {"status", r.status}});
  }
  return json_report(c, std::move(arr));
}

std::string run_polygon_generate(const ExperimentConfig& c) {
  const LatticeWalk walk = build_walk(c.q);
  const LatticePolygon poly = complete_polygon(walk);
  if (c.format == OutputFormat::json) {
    Json steps = Json::array();
    for (const Vec2& s : walk.steps) steps.push_back({s.x, s.y});
    Json res = to_json(poly);
    res["walk_steps"] = std::move(steps);
    res["inradius"] = inradius(poly);
    return json_report(c, std::move(res));
  }
  std::string out = csv_preamble(c) + "k,x,y\n";
  for (std::size_t k = 0; k < poly.vertices.size(); ++k) {
    out += std::to_string(k) + "," + std::to_string(poly.vertices[k].x) + "," + std::to_string(poly.vertices[k].y) + "\n";
  }
  return out;
}

std::string run_polygon_verify(const ExperimentConfig& c) {
  const KsReport r = verify_ks_conditions(*c.polygon, c.r, c.big_r);
  if (c.format == OutputFormat::json) {
    Json w = Json::array();
    for (const auto& x : r.witnesses) {
      w.push_back({{"vertex", {x.vertex.x, x.vertex.y}}, {"lattice_point", {x.lattice_point.x, x.lattice_point.y}}});
    }
    return json_report(c, Json{{"cond_i", r.cond_i},
                               {"cond_ii", r.cond_ii},
                               {"inradius", r.inradius},
                               {"witnesses", std::move(w)},
                               {"derivation", r.derivation}});
  }
  std::string out = csv_preamble(c, {"derivation=" + r.derivation}) + "key,value\n";
  out += std::string("cond_i,") + (r.cond_i ? "true" : "false") + "\n";
  out += std::string("cond_ii,") + (r.cond_ii ? "true" : "false") + "\n";
  out += "inradius," + format_double(r.inradius) + "\n";
  out += "witness_count," + std::to_string(r.witnesses.size()) + "\n";
  for (std::size_t i = 0; i < r.witnesses.size(); ++i) {
    const auto& w = r.witnesses[i];
    out += "witness_" + std::to_string(i + 1) + "," + std::to_string(w.vertex.x) + " " + std::to_string(w.vertex.y) +
           " -> " + std::to_string(w.lattice_point.x) + " " + std::to_string(w.lattice_point.y) + "\n";
  }
  return out;
}

std::string run_wegner(const ExperimentConfig& c) {
  const DensitySpec f(*c.density);
  WegnerParams base;
  base.dim = c.dim;
  base.e = c.e;
  base.samples = c.samples;
  base.seed = c.seed;
  const auto reports = wegner_sweep(*c.vector, f, c.ls, c.eps, base);
  std::optional<LinearityFit> fit;
  try {
    fit = linearity_fit(reports);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::insufficient_points && e.kind() != ErrorKind::invalid_input) throw;
  }
  if (c.format == OutputFormat::json) {
    Json arr = Json::array();
    for (const auto& r : reports) {
      arr.push_back({{"l", r.params.l},
                     {"eps", r.params.eps},
                     {"mean_count", r.mean_count},
                     {"stderr", r.stderr_count},
                     {"normalized_constant", number_json(r.normalized_constant)},
                     {"failed_samples", r.failed_samples}});
    }
    Json res{{"boundary", "periodic"}, {"var_f", reports.empty() ? 0.0 : reports.front().variation}, {"rows", arr}};
    if (fit && fit->eps) {
      res["fit_eps"] = {{"slope", fit->eps->slope},
                        {"intercept", fit->eps->intercept},
                        {"intercept_stderr", fit->eps->intercept_stderr},
                        {"r2", fit->eps->r2}};
    }
    if (fit && fit->volume) res["fit_l"] = {{"exponent", fit->volume->slope}, {"r2", fit->volume->r2}};
    return json_report(c, std::move(res));
  }
  std::vector<std::string> extra{"boundary=periodic"};
  if (fit && fit->eps) {
    extra.push_back("fit_eps slope=" + format_double(fit->eps->slope) + " intercept=" +
                    format_double(fit->eps->intercept) + " intercept_stderr=" +
                    format_double(fit->eps->intercept_stderr) + " r2=" + format_double(fit->eps->r2));
  }
  if (fit && fit->volume) {
    extra.push_back("fit_l exponent=" + format_double(fit->volume->slope) + " r2=" + format_double(fit->volume->r2));
  }
  return csv_preamble(c, extra) + wegner_csv(reports);
}

std::string run_ids(const ExperimentConfig& c) {
  const DensitySpec f(*c.density);
  std::vector<double> grid(c.e_points);
  for (std::size_t i = 0; i < c.e_points; ++i) {
    grid[i] = c.e_min + (c.e_max - c.e_min) * static_cast<double>(i) / static_cast<double>(c.e_points - 1);
  }
  const auto rows = empirical_ids(*c.vector, f, c.ls.front(), c.dim, grid, c.samples, c.seed);
  if (c.format == OutputFormat::csv) return csv_preamble(c, {"boundary=periodic"}) + ids_csv(rows);
  Json arr = Json::array();
  for (const auto& r : rows) arr.push_back({{"E", r.e}, {"N", r.n}, {"stderr", r.stderr_n}});
  return json_report(c, Json{{"boundary", "periodic"}, {"rows", std::move(arr)}});
}

std::string run_suite(const ExperimentConfig& c) {
  const auto rows = averaging_suite(c.seed, c.trials);
  if (c.format == OutputFormat::csv) return csv_preamble(c) + suite_csv(rows);
  Json arr = Json::array();
  for (const auto& r : rows) {
    arr.push_back({{"check", r.check},
                   {"trial", r.trial},
                   {"lhs", r.lhs},
                   {"rhs", r.rhs},
                   {"error_estimate", r.error_estimate},
                   {"pass", r.pass}});
  }
  return json_report(c, std::move(arr));
}

}  // namespace

RunResult run(const ExperimentConfig& c) {
  RunResult res;
  try {
    switch (c.command) {
      case Command::symbol_analyze: res.report = run_symbol(c); break;
      case Command::toeplitz_scan: res.report = run_toeplitz(c); break;
      case Command::polygon_generate: res.report = run_polygon_generate(c); break;
      case Command::polygon_verify: res.report = run_polygon_verify(c); break;
      case Command::wegner_run: res.report = run_wegner(c); break;
      case Command::ids_run: res.report = run_ids(c); break;
      case Command::averaging_suite: res.report = run_suite(c); break;
    }
  } catch (const Error& e) {
    res.exit_code = 1;
    res.error = error_record(e, 1);
  }
  return res;
}

}  // namespace wt
