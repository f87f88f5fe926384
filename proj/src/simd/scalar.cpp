#include <algorithm>
#include <cmath>
#include <limits>

#include "diffwave/simd/kernels.hpp"

namespace diffwave::simd {
namespace {

inline double minmod(double a, double b) {
  return (a * b > 0.0) ? (std::fabs(a) < std::fabs(b) ? a : b) : 0.0;
}

void minmod_faces(const double* q, std::size_t faces, double* left, double* right) {
  for (std::size_t f = 0; f < faces; ++f) {
    const double d0 = q[f + 1] - q[f];
    const double d1 = q[f + 2] - q[f + 1];
    const double d2 = q[f + 3] - q[f + 2];
    left[f] = q[f + 1] + 0.5 * minmod(d0, d1);
    right[f] = q[f + 2] - 0.5 * minmod(d1, d2);
  }
}

void gamma_pressure(const double* v, std::size_t n, double gamma, double* p, double* c) {
  for (std::size_t i = 0; i < n; ++i) {
    const double pi = std::pow(v[i], -gamma);
    p[i] = pi;
    c[i] = std::sqrt(gamma * pi / v[i]);
  }
}

void llf_flux(const double* vl, const double* ul, const double* pl, const double* cl,
              const double* vr, const double* ur, const double* pr, const double* cr,
              std::size_t n, double* fv, double* fu) {
  for (std::size_t i = 0; i < n; ++i) {
    const double s = std::max(cl[i], cr[i]);
    fv[i] = 0.5 * (-ul[i] - ur[i]) - 0.5 * s * (vr[i] - vl[i]);
    fu[i] = 0.5 * (pl[i] + pr[i]) - 0.5 * s * (ur[i] - ul[i]);
  }
}

void hll_flux(const double* vl, const double* ul, const double* pl, const double* cl,
              const double* vr, const double* ur, const double* pr, const double* cr,
              std::size_t n, double* fv, double* fu) {
  for (std::size_t i = 0; i < n; ++i) {
    const double sl = -cl[i];
    const double sr = cr[i];
    const double inv = 1.0 / (sr - sl);
    fv[i] = (sr * (-ul[i]) - sl * (-ur[i]) + sl * sr * (vr[i] - vl[i])) * inv;
    fu[i] = (sr * pl[i] - sl * pr[i] + sl * sr * (ur[i] - ul[i])) * inv;
  }
}

void conservative_update(double* q, const double* flux, std::size_t n, double dtdx) {
  for (std::size_t i = 0; i < n; ++i) q[i] -= dtdx * (flux[i + 1] - flux[i]);
}

void blend(double* q, const double* q0, std::size_t n, double w) {
  const double w1 = 1.0 - w;
  for (std::size_t i = 0; i < n; ++i) q[i] = w * q0[i] + w1 * q[i];
}

void scale(double* q, std::size_t n, double factor) {
  for (std::size_t i = 0; i < n; ++i) q[i] *= factor;
}

void difference3(const double* a, const double* b, const double* c, std::size_t n, double* out) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] - b[i] - c[i];
}

double sum(const double* x, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i];
  return s;
}

double sum_abs(const double* x, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += std::fabs(x[i]);
  return s;
}

double sum_sq(const double* x, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * x[i];
  return s;
}

double max_abs(const double* x, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::fabs(x[i]));
  return m;
}

double min(const double* x, std::size_t n) {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) m = std::min(m, x[i]);
  return m;
}

}  // namespace

namespace detail {
const KernelTable scalar_table{
    Backend::scalar, "scalar", minmod_faces, gamma_pressure, llf_flux,    hll_flux,
    conservative_update, blend, scale,       difference3,    sum,         sum_abs,
    sum_sq,          max_abs, min};
}  // namespace detail

}  // namespace diffwave::simd
