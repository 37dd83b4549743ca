#include "wt/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "wt/error.hpp"
#include "wt/format.hpp"

namespace wt {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorKind::invalid_input, what); }

double as_double(const Json& j, const char* what) {
  if (!j.is_number()) bad(std::string(what) + " must be a number");
  return j.get<double>();
}

int as_int(const Json& j, const char* what) {
  if (!j.is_number_integer()) bad(std::string(what) + " must be an integer");
  return j.get<int>();
}

}  // namespace

Json number_json(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

Json to_json(const ConvolutionVector& a) {
  Json entries = Json::array();
  for (const auto& [k, c] : a.entries()) {
    Json row = Json::array();
    for (int x : k.coords()) row.push_back(x);
    row.push_back(c);
    entries.push_back(std::move(row));
  }
  return Json{{"dim", a.dim()}, {"entries", std::move(entries)}};
}

ConvolutionVector vector_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("dim") || !j.contains("entries")) bad("vector needs dim and entries");
  const int dim = as_int(j.at("dim"), "dim");
  if (dim < 1) bad("dim must be positive");
  std::map<LatticePoint, double> entries;
  for (const auto& row : j.at("entries")) {
    if (!row.is_array() || row.size() != static_cast<std::size_t>(dim) + 1) bad("each entry is [k_1..k_d, a_k]");
    LatticePoint k(static_cast<std::size_t>(dim));
    for (int i = 0; i < dim; ++i) k[static_cast<std::size_t>(i)] = as_int(row[static_cast<std::size_t>(i)], "k");
    if (entries.count(k)) bad("repeated index " + k.str());
    entries[k] = as_double(row.back(), "a_k");
  }
  return ConvolutionVector(static_cast<std::size_t>(dim), entries);
}

Json to_json(const PiecewisePolynomial& f) {
  Json out = Json::array();
  for (const auto& pc : f.pieces()) out.push_back({{"interval", {pc.lo, pc.hi}}, {"coeffs", pc.coeffs}});
  return out;
}

PiecewisePolynomial piecewise_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) bad("piecewise polynomial is a nonempty list of pieces");
  std::vector<PolynomialPiece> pieces;
  for (const auto& p : j) {
    if (!p.is_object() || !p.contains("interval") || !p.contains("coeffs")) bad("piece needs interval and coeffs");
    const auto& iv = p.at("interval");
    if (!iv.is_array() || iv.size() != 2) bad("interval is [lo, hi]");
    PolynomialPiece pc{as_double(iv[0], "lo"), as_double(iv[1], "hi"), {}};
    for (const auto& c : p.at("coeffs")) pc.coeffs.push_back(as_double(c, "coefficient"));
    pieces.push_back(std::move(pc));
  }
  return PiecewisePolynomial(std::move(pieces));
}

DensitySpec density_from_json(const Json& j) {
  try {
    return DensitySpec(piecewise_from_json(j));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::invalid_density) throw;
    throw Error(ErrorKind::invalid_density, e.what());
  }
}

Json to_json(const LatticePolygon& p) {
  Json verts = Json::array();
  for (const Vec2& v : p.vertices) verts.push_back({v.x, v.y});
  return Json{{"q", p.q}, {"vertices", std::move(verts)}};
}

LatticePolygon polygon_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("vertices")) bad("polygon needs vertices");
  std::vector<Vec2> verts;
  for (const auto& v : j.at("vertices")) {
    if (!v.is_array() || v.size() != 2) bad("vertex is [x, y]");
    verts.push_back({as_int(v[0], "x"), as_int(v[1], "y")});
  }
  return make_polygon(std::move(verts), j.contains("q") ? as_int(j.at("q"), "q") : 0);
}

Json to_json(const SymbolReport& r) {
  Json out;
  out["dim"] = r.dim;
  out["grid"] = r.grid;
  out["min_abs"] = number_json(r.min_abs);
  out["argmin"] = r.argmin;
  Json wn = Json::array();
  for (const auto& w : r.winding) wn.push_back(w ? Json(*w) : Json(nullptr));
  out["winding"] = std::move(wn);
  out["sectorial_phase"] = r.sectorial_phase ? Json(*r.sectorial_phase) : Json(nullptr);
  Json zeros = Json::array();
  for (const auto& z : r.real_zeros) zeros.push_back({{"location", z.location}, {"order", z.order}});
  out["real_zeros"] = std::move(zeros);
  out["zeros_non_isolated"] = r.zeros_non_isolated;
  out["separation_radius"] = number_json(r.separation_radius);
  return out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io_error, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::io_error, "cannot write " + path);
  out << text;
  if (!out) throw Error(ErrorKind::io_error, "write failed for " + path);
}

}  // namespace wt
