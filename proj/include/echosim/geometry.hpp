#pragma once

#include <cmath>

namespace echosim {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

inline bool is_finite(const Point& p) { return std::isfinite(p.x) && std::isfinite(p.y); }

// Euclidean distance. Bit-for-bit symmetric: the squared differences are
// invariant under operand swap.
inline double distance(const Point& a, const Point& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return std::sqrt(dx * dx + dy * dy);
}

}  // namespace echosim
