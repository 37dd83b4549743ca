#pragma once

#include <string>

namespace wt {

/// Shortest round-trip decimal form; `inf`, `-inf` and `nan` for non-finite values.
std::string format_double(double v);

}  // namespace wt
