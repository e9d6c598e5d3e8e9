#pragma once

#include <string>

namespace su11 {

/// Shortest decimal that round-trips to the same double.
std::string format_double(double value);

}  // namespace su11
