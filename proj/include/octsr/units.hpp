#pragma once

#include <string>

namespace octsr {

/// Parses a length with a required unit suffix (nm | um | µm | mm | m) into
/// meters.  "892.8nm", "0.8928um" and "8.928e-7m" all parse to the same
/// value.  Unit-less input throws std::invalid_argument.
double parse_length(const std::string& text);

/// Shortest round-trip decimal representation.
std::string format_double(double value);

}  // namespace octsr
