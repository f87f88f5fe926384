#include <cstdlib>
#include <stdexcept>
#include <string>

#include "diffwave/simd/kernels.hpp"

namespace diffwave::simd {

namespace {

#if defined(__x86_64__) || defined(_M_X64)
bool cpu_has_avx2() noexcept {
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") != 0;
}
#endif

const KernelTable& pick() {
  const char* forced = std::getenv("DIFFWAVE_SIMD");
  if (forced != nullptr) {
    const std::string want(forced);
    if (want == "scalar") return detail::scalar_table;
    if (want == "avx2") return table(Backend::avx2);
  }
#if defined(__x86_64__) || defined(_M_X64)
  if (cpu_has_avx2()) return detail::avx2_table;
#endif
  return detail::scalar_table;
}

}  // namespace

bool available(Backend backend) noexcept {
  switch (backend) {
    case Backend::scalar:
      return true;
    case Backend::avx2:
#if defined(__x86_64__) || defined(_M_X64)
      return cpu_has_avx2();
#else
      return false;
#endif
  }
  return false;
}

const KernelTable& table(Backend backend) {
  if (!available(backend)) {
    throw std::runtime_error("SIMD backend '" + std::string(backend_name(backend)) +
                             "' is not available on this CPU");
  }
#if defined(__x86_64__) || defined(_M_X64)
  if (backend == Backend::avx2) return detail::avx2_table;
#endif
  return detail::scalar_table;
}

const KernelTable& active() {
  static const KernelTable& chosen = pick();
  return chosen;
}

std::string_view backend_name(Backend backend) noexcept {
  return backend == Backend::avx2 ? "avx2" : "scalar";
}

}  // namespace diffwave::simd
