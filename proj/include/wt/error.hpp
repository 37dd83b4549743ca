#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace wt {

enum class ErrorKind {
  invalid_input,
  symbol_vanishes,
  inconsistent_winding,
  non_isolated_zeros,
  wrong_dimension,
  dimension_mismatch,
  singular_section,
  no_convergence,
  invalid_density,
  size_mismatch,
  degree_too_high,
  out_of_grid,
  insufficient_points,
  hypothesis_violated,
  not_invertible,
  not_dissipative,
  precondition_violated,
  parse_error,
  validation_error,
  io_error,
};

/// Stable kebab-case identifier used in reports and machine-readable error records.
std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind), message_(message) {}

  ErrorKind kind() const noexcept { return kind_; }
  /// The message without the kind prefix.
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorKind kind_;
  std::string message_;
};

}  // namespace wt
