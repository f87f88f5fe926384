#pragma once

// Cubic Hermite pieces on a unit interval s in [0, 1].

namespace diffwave::detail {

inline double hermite(double s, double y0, double d0, double y1, double d1) {
  const double s2 = s * s;
  const double s3 = s2 * s;
  return (2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + s) * d0 + (-2 * s3 + 3 * s2) * y1 +
         (s3 - s2) * d1;
}

inline double hermite_slope(double s, double y0, double d0, double y1, double d1) {
  const double s2 = s * s;
  return (6 * s2 - 6 * s) * y0 + (3 * s2 - 4 * s + 1) * d0 + (-6 * s2 + 6 * s) * y1 +
         (3 * s2 - 2 * s) * d1;
}

// int_0^s of the cubic above (unit interval; scale by h for physical width).
inline double hermite_integral(double s, double y0, double d0, double y1, double d1) {
  const double s2 = s * s;
  const double s3 = s2 * s;
  const double s4 = s3 * s;
  return y0 * (s - s3 + 0.5 * s4) + d0 * (0.5 * s2 - 2.0 * s3 / 3.0 + 0.25 * s4) +
         y1 * (s3 - 0.5 * s4) + d1 * (0.25 * s4 - s3 / 3.0);
}

}  // namespace diffwave::detail
