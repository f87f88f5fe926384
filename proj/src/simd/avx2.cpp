// AVX2 variants of the kernels in scalar.cpp. Compiled with -mavx2 only; the
// dispatcher never calls into this file on CPUs without AVX2.

#include <immintrin.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "diffwave/simd/kernels.hpp"

namespace diffwave::simd {
namespace {

constexpr std::size_t kLanes = 4;

inline __m256d abs_pd(__m256d x) {
  return _mm256_andnot_pd(_mm256_set1_pd(-0.0), x);
}

inline __m256d neg_pd(__m256d x) { return _mm256_xor_pd(_mm256_set1_pd(-0.0), x); }

inline __m256d minmod_pd(__m256d a, __m256d b) {
  const __m256d same_sign = _mm256_cmp_pd(_mm256_mul_pd(a, b), _mm256_setzero_pd(), _CMP_GT_OQ);
  const __m256d a_smaller = _mm256_cmp_pd(abs_pd(a), abs_pd(b), _CMP_LT_OQ);
  const __m256d pick = _mm256_blendv_pd(b, a, a_smaller);
  return _mm256_and_pd(pick, same_sign);
}

inline double minmod(double a, double b) {
  return (a * b > 0.0) ? (std::fabs(a) < std::fabs(b) ? a : b) : 0.0;
}

// Converts small integral-valued doubles to int64 lanes and back with the
// 2^52 + 2^51 bias trick (AVX2 has no direct 64-bit integer conversion).
inline __m256i round_to_i64(__m256d x) {
  const __m256d magic = _mm256_set1_pd(6755399441055744.0);
  return _mm256_sub_epi64(_mm256_castpd_si256(_mm256_add_pd(x, magic)),
                          _mm256_castpd_si256(magic));
}

inline __m256d i64_to_pd(__m256i n) {
  const __m256d magic = _mm256_set1_pd(6755399441055744.0);
  return _mm256_sub_pd(_mm256_castsi256_pd(_mm256_add_epi64(n, _mm256_castpd_si256(magic))),
                       magic);
}

// Natural log for positive normal inputs: x = m 2^e with m in [sqrt(1/2), sqrt(2)),
// log m = 2 atanh(f), f = (m-1)/(m+1), |f| < 0.1716, series to f^23.
inline __m256d log_pd(__m256d x) {
  const __m256i bits = _mm256_castpd_si256(x);
  __m256i e = _mm256_sub_epi64(_mm256_srli_epi64(bits, 52), _mm256_set1_epi64x(1023));
  const __m256i mant_mask = _mm256_set1_epi64x(0x000FFFFFFFFFFFFFLL);
  const __m256i one_bits = _mm256_set1_epi64x(0x3FF0000000000000LL);
  __m256d m = _mm256_castsi256_pd(_mm256_or_si256(_mm256_and_si256(bits, mant_mask), one_bits));
  const __m256d big = _mm256_cmp_pd(m, _mm256_set1_pd(1.4142135623730951), _CMP_GT_OQ);
  m = _mm256_blendv_pd(m, _mm256_mul_pd(m, _mm256_set1_pd(0.5)), big);
  e = _mm256_add_epi64(e, _mm256_and_si256(_mm256_castpd_si256(big), _mm256_set1_epi64x(1)));

  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d f = _mm256_div_pd(_mm256_sub_pd(m, one), _mm256_add_pd(m, one));
  const __m256d f2 = _mm256_mul_pd(f, f);
  // Horner on 1 + f2/3 + f2^2/5 + ... + f2^11/23.
  __m256d poly = _mm256_set1_pd(1.0 / 23.0);
  for (int k = 21; k >= 1; k -= 2) {
    poly = _mm256_add_pd(_mm256_mul_pd(poly, f2), _mm256_set1_pd(1.0 / k));
  }
  const __m256d log_m = _mm256_mul_pd(_mm256_mul_pd(_mm256_set1_pd(2.0), f), poly);

  const __m256d ln2_hi = _mm256_set1_pd(6.93147180369123816490e-01);
  const __m256d ln2_lo = _mm256_set1_pd(1.90821492927058770002e-10);
  const __m256d ed = i64_to_pd(e);
  return _mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(ed, ln2_hi), log_m),
                       _mm256_mul_pd(ed, ln2_lo));
}

// exp(y) for |y| < 700: y = n ln2 + r, |r| <= ln2/2, Taylor to r^13.
inline __m256d exp_pd(__m256d y) {
  const __m256d n = _mm256_round_pd(_mm256_mul_pd(y, _mm256_set1_pd(1.4426950408889634)),
                                    _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  const __m256d ln2_hi = _mm256_set1_pd(6.93147180369123816490e-01);
  const __m256d ln2_lo = _mm256_set1_pd(1.90821492927058770002e-10);
  const __m256d r =
      _mm256_sub_pd(_mm256_sub_pd(y, _mm256_mul_pd(n, ln2_hi)), _mm256_mul_pd(n, ln2_lo));

  double inv_fact[14];
  inv_fact[0] = 1.0;
  for (int k = 1; k < 14; ++k) inv_fact[k] = inv_fact[k - 1] / k;
  __m256d poly = _mm256_set1_pd(inv_fact[13]);
  for (int k = 12; k >= 0; --k) {
    poly = _mm256_add_pd(_mm256_mul_pd(poly, r), _mm256_set1_pd(inv_fact[k]));
  }
  const __m256i scale_bits =
      _mm256_slli_epi64(_mm256_add_epi64(round_to_i64(n), _mm256_set1_epi64x(1023)), 52);
  return _mm256_mul_pd(poly, _mm256_castsi256_pd(scale_bits));
}

void minmod_faces(const double* q, std::size_t faces, double* left, double* right) {
  const __m256d half = _mm256_set1_pd(0.5);
  std::size_t f = 0;
  for (; f + kLanes <= faces; f += kLanes) {
    const __m256d q0 = _mm256_loadu_pd(q + f);
    const __m256d q1 = _mm256_loadu_pd(q + f + 1);
    const __m256d q2 = _mm256_loadu_pd(q + f + 2);
    const __m256d q3 = _mm256_loadu_pd(q + f + 3);
    const __m256d d0 = _mm256_sub_pd(q1, q0);
    const __m256d d1 = _mm256_sub_pd(q2, q1);
    const __m256d d2 = _mm256_sub_pd(q3, q2);
    _mm256_storeu_pd(left + f, _mm256_add_pd(q1, _mm256_mul_pd(half, minmod_pd(d0, d1))));
    _mm256_storeu_pd(right + f, _mm256_sub_pd(q2, _mm256_mul_pd(half, minmod_pd(d1, d2))));
  }
  for (; f < faces; ++f) {
    const double d0 = q[f + 1] - q[f];
    const double d1 = q[f + 2] - q[f + 1];
    const double d2 = q[f + 3] - q[f + 2];
    left[f] = q[f + 1] + 0.5 * minmod(d0, d1);
    right[f] = q[f + 2] - 0.5 * minmod(d1, d2);
  }
}

void gamma_pressure(const double* v, std::size_t n, double gamma, double* p, double* c) {
  const __m256d neg_g = _mm256_set1_pd(-gamma);
  const __m256d g = _mm256_set1_pd(gamma);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d vi = _mm256_loadu_pd(v + i);
    const __m256d pi = exp_pd(_mm256_mul_pd(neg_g, log_pd(vi)));
    _mm256_storeu_pd(p + i, pi);
    _mm256_storeu_pd(c + i, _mm256_sqrt_pd(_mm256_div_pd(_mm256_mul_pd(g, pi), vi)));
  }
  for (; i < n; ++i) {
    const double pi = std::pow(v[i], -gamma);
    p[i] = pi;
    c[i] = std::sqrt(gamma * pi / v[i]);
  }
}

void llf_flux(const double* vl, const double* ul, const double* pl, const double* cl,
              const double* vr, const double* ur, const double* pr, const double* cr,
              std::size_t n, double* fv, double* fu) {
  const __m256d half = _mm256_set1_pd(0.5);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d uli = _mm256_loadu_pd(ul + i);
    const __m256d uri = _mm256_loadu_pd(ur + i);
    const __m256d hs = _mm256_mul_pd(half, _mm256_max_pd(_mm256_loadu_pd(cl + i),
                                                         _mm256_loadu_pd(cr + i)));
    const __m256d jump_v = _mm256_sub_pd(_mm256_loadu_pd(vr + i), _mm256_loadu_pd(vl + i));
    const __m256d jump_u = _mm256_sub_pd(uri, uli);
    const __m256d avg_fv = _mm256_mul_pd(half, _mm256_sub_pd(neg_pd(uli), uri));
    const __m256d avg_fu =
        _mm256_mul_pd(half, _mm256_add_pd(_mm256_loadu_pd(pl + i), _mm256_loadu_pd(pr + i)));
    _mm256_storeu_pd(fv + i, _mm256_sub_pd(avg_fv, _mm256_mul_pd(hs, jump_v)));
    _mm256_storeu_pd(fu + i, _mm256_sub_pd(avg_fu, _mm256_mul_pd(hs, jump_u)));
  }
  for (; i < n; ++i) {
    const double s = std::max(cl[i], cr[i]);
    fv[i] = 0.5 * (-ul[i] - ur[i]) - 0.5 * s * (vr[i] - vl[i]);
    fu[i] = 0.5 * (pl[i] + pr[i]) - 0.5 * s * (ur[i] - ul[i]);
  }
}

void hll_flux(const double* vl, const double* ul, const double* pl, const double* cl,
              const double* vr, const double* ur, const double* pr, const double* cr,
              std::size_t n, double* fv, double* fu) {
  const __m256d one = _mm256_set1_pd(1.0);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d sl = neg_pd(_mm256_loadu_pd(cl + i));
    const __m256d sr = _mm256_loadu_pd(cr + i);
    const __m256d inv = _mm256_div_pd(one, _mm256_sub_pd(sr, sl));
    const __m256d slsr = _mm256_mul_pd(sl, sr);
    const __m256d uli = _mm256_loadu_pd(ul + i);
    const __m256d uri = _mm256_loadu_pd(ur + i);
    const __m256d jump_v = _mm256_sub_pd(_mm256_loadu_pd(vr + i), _mm256_loadu_pd(vl + i));
    const __m256d jump_u = _mm256_sub_pd(uri, uli);
    const __m256d a_v = _mm256_mul_pd(sr, neg_pd(uli));
    const __m256d b_v = _mm256_mul_pd(sl, neg_pd(uri));
    const __m256d a_u = _mm256_mul_pd(sr, _mm256_loadu_pd(pl + i));
    const __m256d b_u = _mm256_mul_pd(sl, _mm256_loadu_pd(pr + i));
    _mm256_storeu_pd(
        fv + i, _mm256_mul_pd(_mm256_add_pd(_mm256_sub_pd(a_v, b_v), _mm256_mul_pd(slsr, jump_v)),
                              inv));
    _mm256_storeu_pd(
        fu + i, _mm256_mul_pd(_mm256_add_pd(_mm256_sub_pd(a_u, b_u), _mm256_mul_pd(slsr, jump_u)),
                              inv));
  }
  for (; i < n; ++i) {
    const double sl = -cl[i];
    const double sr = cr[i];
    const double inv = 1.0 / (sr - sl);
    fv[i] = (sr * (-ul[i]) - sl * (-ur[i]) + sl * sr * (vr[i] - vl[i])) * inv;
    fu[i] = (sr * pl[i] - sl * pr[i] + sl * sr * (ur[i] - ul[i])) * inv;
  }
}

void conservative_update(double* q, const double* flux, std::size_t n, double dtdx) {
  const __m256d k = _mm256_set1_pd(dtdx);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d diff = _mm256_sub_pd(_mm256_loadu_pd(flux + i + 1), _mm256_loadu_pd(flux + i));
    _mm256_storeu_pd(q + i, _mm256_sub_pd(_mm256_loadu_pd(q + i), _mm256_mul_pd(k, diff)));
  }
  for (; i < n; ++i) q[i] -= dtdx * (flux[i + 1] - flux[i]);
}

void blend(double* q, const double* q0, std::size_t n, double w) {
  const double w1 = 1.0 - w;
  const __m256d wv = _mm256_set1_pd(w);
  const __m256d w1v = _mm256_set1_pd(w1);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    _mm256_storeu_pd(q + i, _mm256_add_pd(_mm256_mul_pd(wv, _mm256_loadu_pd(q0 + i)),
                                          _mm256_mul_pd(w1v, _mm256_loadu_pd(q + i))));
  }
  for (; i < n; ++i) q[i] = w * q0[i] + w1 * q[i];
}

void scale(double* q, std::size_t n, double factor) {
  const __m256d f = _mm256_set1_pd(factor);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    _mm256_storeu_pd(q + i, _mm256_mul_pd(_mm256_loadu_pd(q + i), f));
  }
  for (; i < n; ++i) q[i] *= factor;
}

void difference3(const double* a, const double* b, const double* c, std::size_t n, double* out) {
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    _mm256_storeu_pd(out + i, _mm256_sub_pd(_mm256_sub_pd(_mm256_loadu_pd(a + i),
                                                          _mm256_loadu_pd(b + i)),
                                            _mm256_loadu_pd(c + i)));
  }
  for (; i < n; ++i) out[i] = a[i] - b[i] - c[i];
}

inline double hsum(__m256d x) {
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, x);
  return (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
}

inline double hmax(__m256d x) {
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, x);
  return std::max(std::max(lanes[0], lanes[1]), std::max(lanes[2], lanes[3]));
}

inline double hmin(__m256d x) {
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, x);
  return std::min(std::min(lanes[0], lanes[1]), std::min(lanes[2], lanes[3]));
}

double sum(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
  double s = hsum(acc);
  for (; i < n; ++i) s += x[i];
  return s;
}

double sum_abs(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) acc = _mm256_add_pd(acc, abs_pd(_mm256_loadu_pd(x + i)));
  double s = hsum(acc);
  for (; i < n; ++i) s += std::fabs(x[i]);
  return s;
}

double sum_sq(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d xi = _mm256_loadu_pd(x + i);
    acc = _mm256_add_pd(acc, _mm256_mul_pd(xi, xi));
  }
  double s = hsum(acc);
  for (; i < n; ++i) s += x[i] * x[i];
  return s;
}

double max_abs(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) acc = _mm256_max_pd(acc, abs_pd(_mm256_loadu_pd(x + i)));
  double m = hmax(acc);
  for (; i < n; ++i) m = std::max(m, std::fabs(x[i]));
  return m;
}

double min(const double* x, std::size_t n) {
  __m256d acc = _mm256_set1_pd(std::numeric_limits<double>::infinity());
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) acc = _mm256_min_pd(acc, _mm256_loadu_pd(x + i));
  double m = hmin(acc);
  for (; i < n; ++i) m = std::min(m, x[i]);
  return m;
}

}  // namespace

namespace detail {
const KernelTable avx2_table{
    Backend::avx2,       "avx2", minmod_faces, gamma_pressure, llf_flux, hll_flux,
    conservative_update, blend,  scale,        difference3,    sum,      sum_abs,
    sum_sq,              max_abs, min};
}  // namespace detail

}  // namespace diffwave::simd
