#pragma once

#include <json.hpp>

#include <string>

#include "wt/density.hpp"
#include "wt/polygon.hpp"
#include "wt/symbol.hpp"

namespace wt {

using Json = nlohmann::ordered_json;

/// {"dim": d, "entries": [[k_1, ..., k_d, a_k], ...]}
Json to_json(const ConvolutionVector& a);
ConvolutionVector vector_from_json(const Json& j);

/// [{"interval": [lo, hi], "coeffs": [c0, c1, ...]}, ...]
Json to_json(const PiecewisePolynomial& f);
PiecewisePolynomial piecewise_from_json(const Json& j);
DensitySpec density_from_json(const Json& j);

/// {"q": q, "vertices": [[x, y], ...]}
Json to_json(const LatticePolygon& p);
LatticePolygon polygon_from_json(const Json& j);

/// Flat key-value document.
Json to_json(const SymbolReport& r);

/// Finite numbers as JSON numbers, non-finite ones as the strings "inf",
/// "-inf" and "nan".
Json number_json(double v);

/// Throws io_error.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace wt
