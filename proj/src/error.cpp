#include "wt/error.hpp"

namespace wt {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::invalid_input: return "invalid-input";
    case ErrorKind::symbol_vanishes: return "symbol-vanishes";
    case ErrorKind::inconsistent_winding: return "inconsistent-winding";
    case ErrorKind::non_isolated_zeros: return "non-isolated-zeros";
    case ErrorKind::wrong_dimension: return "wrong-dimension";
    case ErrorKind::dimension_mismatch: return "dimension-mismatch";
    case ErrorKind::singular_section: return "singular-section";
    case ErrorKind::no_convergence: return "no-convergence";
    case ErrorKind::invalid_density: return "invalid-density";
    case ErrorKind::size_mismatch: return "size-mismatch";
    case ErrorKind::degree_too_high: return "degree-too-high";
    case ErrorKind::out_of_grid: return "out-of-grid";
    case ErrorKind::insufficient_points: return "insufficient-points";
    case ErrorKind::hypothesis_violated: return "hypothesis-violated";
    case ErrorKind::not_invertible: return "not-invertible";
    case ErrorKind::not_dissipative: return "not-dissipative";
    case ErrorKind::precondition_violated: return "precondition-violated";
    case ErrorKind::parse_error: return "parse-error";
    case ErrorKind::validation_error: return "validation-error";
    case ErrorKind::io_error: return "io-error";
  }
  return "unknown";
}

}  // namespace wt
