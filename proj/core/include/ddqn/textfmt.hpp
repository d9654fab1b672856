#pragma once

#include <cstdio>
#include <string>

namespace ddqn {

/// Shortest decimal form that round-trips a double exactly (17 significant
/// digits). All float serialization in CSV/config/checkpoint files uses this.
inline std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace ddqn
