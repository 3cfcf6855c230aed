#pragma once

#include <string>

namespace viamdp {

/// Shortest decimal string that round-trips to the same double.
std::string format_double(double value);

}  // namespace viamdp
