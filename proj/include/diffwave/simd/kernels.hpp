#pragma once

// Data-parallel inner loops of the solver and the norm reductions.
//
// Every kernel exists as a scalar reference and, on x86-64, an AVX2 variant.
// The active table is picked once at first use from the CPU features; the
// environment variable DIFFWAVE_SIMD=scalar|avx2 forces a backend.
//
// Elementwise kernels without transcendental functions produce bit-identical
// results on both backends (no FMA contraction is used). gamma_pressure and the
// reductions agree to a few ulps.

#include <cstddef>
#include <span>
#include <string_view>

namespace diffwave::simd {

enum class Backend { scalar, avx2 };

struct KernelTable {
  Backend backend;
  const char* name;

  // Face states from an extended array q[0 .. faces+2] (two ghosts each side).
  // Face f sits between q[f+1] and q[f+2].
  void (*minmod_faces)(const double* q, std::size_t faces, double* left, double* right);
  // p = v^-gamma, c = sqrt(-p'(v)) = sqrt(gamma p / v).
  void (*gamma_pressure)(const double* v, std::size_t n, double gamma, double* p, double* c);
  // Lagrangian p-system flux (-u, p) at n faces from left/right face states.
  void (*llf_flux)(const double* vl, const double* ul, const double* pl, const double* cl,
                   const double* vr, const double* ur, const double* pr, const double* cr,
                   std::size_t n, double* fv, double* fu);
  void (*hll_flux)(const double* vl, const double* ul, const double* pl, const double* cl,
                   const double* vr, const double* ur, const double* pr, const double* cr,
                   std::size_t n, double* fv, double* fu);
  // q[i] -= dtdx * (flux[i+1] - flux[i]), i < n.
  void (*conservative_update)(double* q, const double* flux, std::size_t n, double dtdx);
  // q[i] = w * q0[i] + (1 - w) * q[i].
  void (*blend)(double* q, const double* q0, std::size_t n, double w);
  void (*scale)(double* q, std::size_t n, double factor);
  // out[i] = a[i] - b[i] - c[i].
  void (*difference3)(const double* a, const double* b, const double* c, std::size_t n,
                      double* out);

  double (*sum)(const double* x, std::size_t n);
  double (*sum_abs)(const double* x, std::size_t n);
  double (*sum_sq)(const double* x, std::size_t n);
  double (*max_abs)(const double* x, std::size_t n);
  double (*min)(const double* x, std::size_t n);
};

bool available(Backend backend) noexcept;
const KernelTable& table(Backend backend);
const KernelTable& active();
std::string_view backend_name(Backend backend) noexcept;

namespace detail {
extern const KernelTable scalar_table;
#if defined(__x86_64__) || defined(_M_X64)
extern const KernelTable avx2_table;
#endif
}  // namespace detail

}  // namespace diffwave::simd
