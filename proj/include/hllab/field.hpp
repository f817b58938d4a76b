#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hllab {

enum class Field { real, complex };

[[nodiscard]] constexpr const char* to_string(Field f) {
  return f == Field::real ? "real" : "complex";
}

[[nodiscard]] inline Field parse_field(std::string_view s) {
  if (s == "real") return Field::real;
  if (s == "complex") return Field::complex;
  throw std::invalid_argument("unknown field: " + std::string(s) +
                              " (expected real|complex)");
}

}  // namespace hllab
