// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.

#include <immintrin.h>

#include <cmath>

#include "relequil/kernels.hpp"

namespace relequil::kernels::avx2 {

namespace {

inline __m256d polevl(__m256d x, const double* c, int degree) {
  __m256d r = _mm256_set1_pd(c[0]);
  for (int k = 1; k <= degree; ++k) r = _mm256_fmadd_pd(r, x, _mm256_set1_pd(c[k]));
  return r;
}

// Cephes-style natural log for positive normal inputs.
inline __m256d log_pd(__m256d x) {
  static const double p[] = {1.01875663804580931796E-4, 4.97494994976747001425E-1, 4.70579119878881725854E0,
                             1.44989225341610930846E1,  1.79368678507819816313E1,  7.70838733755885391666E0};
  static const double q[] = {1.0, 1.12873587189167450590E1, 4.52279145837532221105E1, 8.29875266912776603211E1,
                             7.11544750618563894466E1, 2.31251620126765340583E1};
  const __m256i bits = _mm256_castpd_si256(x);
  // Biased exponent to double through the 2^52 trick.
  const __m256i biased = _mm256_srli_epi64(bits, 52);
  const __m256d two52 = _mm256_set1_pd(4503599627370496.0);
  __m256d e = _mm256_sub_pd(_mm256_castsi256_pd(_mm256_or_si256(biased, _mm256_castpd_si256(two52))), two52);
  e = _mm256_sub_pd(e, _mm256_set1_pd(1022.0));
  // Mantissa in [0.5, 1).
  const __m256i mant_mask = _mm256_set1_epi64x(0x000FFFFFFFFFFFFFLL);
  const __m256i half_bits = _mm256_set1_epi64x(0x3FE0000000000000LL);
  __m256d m = _mm256_castsi256_pd(_mm256_or_si256(_mm256_and_si256(bits, mant_mask), half_bits));

  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d small = _mm256_cmp_pd(m, _mm256_set1_pd(0.70710678118654752440), _CMP_LT_OQ);
  e = _mm256_sub_pd(e, _mm256_and_pd(small, one));
  m = _mm256_sub_pd(_mm256_add_pd(m, _mm256_and_pd(small, m)), one);

  const __m256d z = _mm256_mul_pd(m, m);
  __m256d y = _mm256_mul_pd(m, _mm256_div_pd(_mm256_mul_pd(z, polevl(m, p, 5)), polevl(m, q, 5)));
  y = _mm256_fnmadd_pd(e, _mm256_set1_pd(2.121944400546905827679e-4), y);
  y = _mm256_fnmadd_pd(_mm256_set1_pd(0.5), z, y);
  return _mm256_fmadd_pd(e, _mm256_set1_pd(0.693359375), _mm256_add_pd(m, y));
}

// Cephes-style exp, valid where the result is a normal double.
inline __m256d exp_pd(__m256d x) {
  static const double p[] = {1.26177193074810590878E-4, 3.02994407707441961300E-2, 9.99999999999999999910E-1};
  static const double q[] = {3.00198505138664455042E-6, 2.52448340349684104192E-3, 2.27265548208155028766E-1,
                             2.00000000000000000009E0};
  __m256d px = _mm256_floor_pd(_mm256_fmadd_pd(_mm256_set1_pd(1.4426950408889634073599), x, _mm256_set1_pd(0.5)));
  x = _mm256_fnmadd_pd(px, _mm256_set1_pd(6.93145751953125E-1), x);
  x = _mm256_fnmadd_pd(px, _mm256_set1_pd(1.42860682030941723212E-6), x);
  const __m256d xx = _mm256_mul_pd(x, x);
  const __m256d num = _mm256_mul_pd(x, polevl(xx, p, 2));
  x = _mm256_div_pd(num, _mm256_sub_pd(polevl(xx, q, 3), num));
  x = _mm256_fmadd_pd(_mm256_set1_pd(2.0), x, _mm256_set1_pd(1.0));
  // 2^n from the integer in the low mantissa bits of px + 1.5 * 2^52.
  const __m256d magic = _mm256_set1_pd(6755399441055744.0);
  __m256i n = _mm256_sub_epi64(_mm256_castpd_si256(_mm256_add_pd(px, magic)), _mm256_castpd_si256(magic));
  n = _mm256_slli_epi64(_mm256_add_epi64(n, _mm256_set1_epi64x(1023)), 52);
  return _mm256_mul_pd(x, _mm256_castsi256_pd(n));
}

inline __m256d inverse_power_pd(__m256d r2, double alpha) {
  return exp_pd(_mm256_mul_pd(_mm256_set1_pd(-0.5 * alpha), log_pd(r2)));
}

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v), hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

}  // namespace

void inverse_powers(const double* r2, std::size_t count, double alpha, double* out) {
  std::size_t k = 0;
  for (; k + 4 <= count; k += 4) _mm256_storeu_pd(out + k, inverse_power_pd(_mm256_loadu_pd(r2 + k), alpha));
  for (; k < count; ++k) out[k] = std::pow(r2[k], -0.5 * alpha);
}

void potential_gradient(const Bodies& b, double alpha, double* u, double* gx, double* gy) {
  for (std::size_t i = 0; i < b.n; ++i) gx[i] = gy[i] = 0.0;
  const __m256d minus_alpha = _mm256_set1_pd(-alpha);
  double total = 0.0;
  for (std::size_t i = 0; i < b.n; ++i) {
    const __m256d xi = _mm256_set1_pd(b.x[i]), yi = _mm256_set1_pd(b.y[i]), mi = _mm256_set1_pd(b.m[i]);
    __m256d acc_u = _mm256_setzero_pd(), acc_x = _mm256_setzero_pd(), acc_y = _mm256_setzero_pd();
    std::size_t j = i + 1;
    for (; j + 4 <= b.n; j += 4) {
      const __m256d dx = _mm256_sub_pd(xi, _mm256_loadu_pd(b.x + j));
      const __m256d dy = _mm256_sub_pd(yi, _mm256_loadu_pd(b.y + j));
      const __m256d r2 = _mm256_fmadd_pd(dy, dy, _mm256_mul_pd(dx, dx));
      const __m256d w = _mm256_mul_pd(_mm256_mul_pd(mi, _mm256_loadu_pd(b.m + j)), inverse_power_pd(r2, alpha));
      const __m256d f = _mm256_div_pd(_mm256_mul_pd(minus_alpha, w), r2);
      const __m256d fx = _mm256_mul_pd(f, dx), fy = _mm256_mul_pd(f, dy);
      acc_u = _mm256_add_pd(acc_u, w);
      acc_x = _mm256_add_pd(acc_x, fx);
      acc_y = _mm256_add_pd(acc_y, fy);
      _mm256_storeu_pd(gx + j, _mm256_sub_pd(_mm256_loadu_pd(gx + j), fx));
      _mm256_storeu_pd(gy + j, _mm256_sub_pd(_mm256_loadu_pd(gy + j), fy));
    }
    double su = hsum(acc_u), sx = hsum(acc_x), sy = hsum(acc_y);
    for (; j < b.n; ++j) {
      const double dx = b.x[i] - b.x[j], dy = b.y[i] - b.y[j];
      const double r2 = dx * dx + dy * dy;
      const double w = b.m[i] * b.m[j] * std::pow(r2, -0.5 * alpha);
      const double f = -alpha * w / r2;
      su += w;
      sx += f * dx;
      sy += f * dy;
      gx[j] -= f * dx;
      gy[j] -= f * dy;
    }
    total += su;
    gx[i] += sx;
    gy[i] += sy;
  }
  *u = total;
}

}  // namespace relequil::kernels::avx2
