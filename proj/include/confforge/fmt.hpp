// Decimal formatting shared by every serialized number in the project:
// 17 significant digits round-trip any double exactly.
#pragma once

#include <cstdio>
#include <string>

namespace confforge {

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace confforge
