#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

namespace coopsense::detail {

// lgamma_r does not touch the global signgam, so this stays reentrant.
inline double log_gamma(double x) {
  int sign = 0;
  return ::lgamma_r(x, &sign);
}

// Short %g rendering for diagnostics.
inline std::string format_g(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

inline double clamp_unit(double p) { return std::clamp(p, 0.0, 1.0); }

}  // namespace coopsense::detail
