#pragma once

// Pairwise kernels of the n-body potential. Each has a scalar reference
// implementation and, on x86-64 builds, an AVX2 variant chosen at runtime.
// RELEQUIL_KERNELS=scalar|avx2 overrides the choice.

#include <cstddef>

namespace relequil::kernels {

enum class Isa { scalar, avx2 };

const char* to_string(Isa isa);

/// Structure-of-arrays input: x, y, m each of length n.
struct Bodies {
  const double* x;
  const double* y;
  const double* m;
  std::size_t n;
};

struct Table {
  /// U = sum_{i<j} m_i m_j r_ij^-alpha and its gradient (gx, gy of length n).
  void (*potential_gradient)(const Bodies& b, double alpha, double* u, double* gx, double* gy);
  /// out[k] = r2[k]^(-alpha/2).
  void (*inverse_powers)(const double* r2, std::size_t count, double alpha, double* out);
};

bool available(Isa isa);
/// Best available ISA unless overridden by the environment.
Isa selected();
const Table& table(Isa isa);
inline const Table& active() { return table(selected()); }

namespace scalar {
void potential_gradient(const Bodies& b, double alpha, double* u, double* gx, double* gy);
void inverse_powers(const double* r2, std::size_t count, double alpha, double* out);
}  // namespace scalar

}  // namespace relequil::kernels
