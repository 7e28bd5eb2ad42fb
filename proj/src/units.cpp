#include "octsr/units.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace octsr {

double parse_length(const std::string& text) {
  const char* begin = text.c_str();
  char* end = nullptr;
  const double value = std::strtod(begin, &end);
  if (end == begin || !std::isfinite(value))
    throw std::invalid_argument("cannot parse length from '" + text + "'");

  std::string suffix(end);
  while (!suffix.empty() && std::isspace(static_cast<unsigned char>(suffix.front())))
    suffix.erase(suffix.begin());
  while (!suffix.empty() && std::isspace(static_cast<unsigned char>(suffix.back())))
    suffix.pop_back();

  double scale;
  if (suffix == "m") scale = 1.0;
  else if (suffix == "mm") scale = 1e-3;
  else if (suffix == "um" || suffix == "µm" || suffix == "μm") scale = 1e-6;
  else if (suffix == "nm") scale = 1e-9;
  else if (suffix.empty())
    throw std::invalid_argument("length '" + text +
                                "' is missing a unit suffix (nm|um|mm|m)");
  else
    throw std::invalid_argument("unknown length unit '" + suffix + "' in '" + text + "'");
  return value * scale;
}

std::string format_double(double value) {
  char buffer[32];
  const auto res = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, res.ptr);
}

}  // namespace octsr
