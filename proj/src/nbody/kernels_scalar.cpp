#include <cmath>
#include <cstdlib>
#include <cstring>
#include <stdexcept>
#include <string>

#include "relequil/kernels.hpp"

namespace relequil::kernels {

namespace scalar {

void potential_gradient(const Bodies& b, double alpha, double* u, double* gx, double* gy) {
  double total = 0.0;
  for (std::size_t i = 0; i < b.n; ++i) gx[i] = gy[i] = 0.0;
  for (std::size_t i = 0; i < b.n; ++i) {
    for (std::size_t j = i + 1; j < b.n; ++j) {
      const double dx = b.x[i] - b.x[j];
      const double dy = b.y[i] - b.y[j];
      const double r2 = dx * dx + dy * dy;
      const double w = b.m[i] * b.m[j] * std::pow(r2, -0.5 * alpha);
      total += w;
      // d/dq_i of w = -alpha w d / r^2
      const double f = -alpha * w / r2;
      gx[i] += f * dx;
      gy[i] += f * dy;
      gx[j] -= f * dx;
      gy[j] -= f * dy;
    }
  }
  *u = total;
}

void inverse_powers(const double* r2, std::size_t count, double alpha, double* out) {
  for (std::size_t k = 0; k < count; ++k) out[k] = std::pow(r2[k], -0.5 * alpha);
}

}  // namespace scalar

#if defined(RELEQUIL_HAVE_AVX2)
namespace avx2 {
void potential_gradient(const Bodies& b, double alpha, double* u, double* gx, double* gy);
void inverse_powers(const double* r2, std::size_t count, double alpha, double* out);
}  // namespace avx2
#endif

const char* to_string(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

bool available(Isa isa) {
  switch (isa) {
    case Isa::scalar: return true;
    case Isa::avx2:
#if defined(RELEQUIL_HAVE_AVX2)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
  }
  return false;
}

Isa selected() {
  static const Isa choice = [] {
    if (const char* env = std::getenv("RELEQUIL_KERNELS")) {
      if (std::strcmp(env, "scalar") == 0) return Isa::scalar;
      if (std::strcmp(env, "avx2") == 0 && available(Isa::avx2)) return Isa::avx2;
    }
    return available(Isa::avx2) ? Isa::avx2 : Isa::scalar;
  }();
  return choice;
}

const Table& table(Isa isa) {
  static const Table scalar_table{scalar::potential_gradient, scalar::inverse_powers};
#if defined(RELEQUIL_HAVE_AVX2)
  static const Table avx2_table{avx2::potential_gradient, avx2::inverse_powers};
  if (isa == Isa::avx2) {
    if (!available(Isa::avx2)) throw std::runtime_error("AVX2 kernels requested on a CPU without AVX2/FMA");
    return avx2_table;
  }
#else
  if (isa == Isa::avx2) throw std::runtime_error("AVX2 kernels were not compiled into this build");
#endif
  return scalar_table;
}

}  // namespace relequil::kernels
