#pragma once

// Shared generators and independent oracles for the test suites. The oracles
// here deliberately avoid the library's own elimination and root-counting
// code so that a bug there cannot hide behind itself.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <random>
#include <vector>

#include "relequil/matrix.hpp"
#include "relequil/numeric.hpp"

namespace relequil::testing {

inline std::uint64_t seed() {
  if (const char* env = std::getenv("RELEQUIL_SEED")) return std::strtoull(env, nullptr, 10);
  return 12345;
}

inline Rational small_rational(std::mt19937_64& rng, int span = 4, int max_den = 3) {
  std::uniform_int_distribution<int> num(-span, span), den(1, max_den);
  return make_rational(num(rng), den(rng));
}

/// Entries are zero with probability `zero_prob`, otherwise small rationals.
inline RatMatrix random_symmetric(std::mt19937_64& rng, std::size_t dim, double zero_prob = 0.25) {
  std::bernoulli_distribution zero(zero_prob);
  RatMatrix b(dim, dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = i; j < dim; ++j) b(i, j) = b(j, i) = zero(rng) ? Rational(0) : small_rational(rng);
  return b;
}

/// Unit lower triangular times a random permutation: always invertible.
inline RatMatrix random_invertible(std::mt19937_64& rng, std::size_t dim) {
  RatMatrix l = RatMatrix::identity(dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < i; ++j) l(i, j) = small_rational(rng, 2, 2);
  std::vector<std::size_t> perm(dim);
  for (std::size_t i = 0; i < dim; ++i) perm[i] = i;
  std::shuffle(perm.begin(), perm.end(), rng);
  RatMatrix p(dim, dim);
  for (std::size_t i = 0; i < dim; ++i) p(i, perm[i]) = 1;
  return l * p;
}

/// Determinant by plain Gaussian elimination with row swaps.
inline Rational det_oracle(RatMatrix a) {
  const std::size_t n = a.rows();
  Rational det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && a(p, c) == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      for (std::size_t k = 0; k < n; ++k) std::swap(a(p, k), a(c, k));
      det = -det;
    }
    det *= a(c, c);
    for (std::size_t r = c + 1; r < n; ++r) {
      const Rational f = a(r, c) / a(c, c);
      if (f == 0) continue;
      for (std::size_t k = c; k < n; ++k) a(r, k) -= f * a(c, k);
    }
  }
  return det;
}

/// Coefficients (constant term first) of det(x I - A), by Lagrange
/// interpolation of det_oracle at x = 0..n.
inline std::vector<Rational> charpoly_oracle(const RatMatrix& a) {
  const std::size_t n = a.rows();
  std::vector<Rational> coeffs(n + 1, Rational(0));
  for (std::size_t k = 0; k <= n; ++k) {
    RatMatrix m = RatMatrix::identity(n) * Rational(static_cast<long>(k)) - a;
    const Rational y = det_oracle(m);
    // Lagrange basis polynomial for node k, expanded.
    std::vector<Rational> basis{Rational(1)};
    Rational denom = 1;
    for (std::size_t j = 0; j <= n; ++j) {
      if (j == k) continue;
      std::vector<Rational> next(basis.size() + 1, Rational(0));
      for (std::size_t t = 0; t < basis.size(); ++t) {
        next[t + 1] += basis[t];
        next[t] -= basis[t] * static_cast<long>(j);
      }
      basis = next;
      denom *= Rational(static_cast<long>(k) - static_cast<long>(j));
    }
    for (std::size_t t = 0; t < basis.size(); ++t) coeffs[t] += y * basis[t] / denom;
  }
  return coeffs;
}

/// Inertia of a symmetric matrix from its characteristic polynomial: every
/// root is real, so Descartes' rule of signs counts positive roots exactly.
inline IndexReport inertia_oracle(const RatMatrix& b) {
  std::vector<Rational> c = charpoly_oracle(b);
  const int n = static_cast<int>(b.rows());
  int nullity = 0;
  while (nullity < n && c[static_cast<std::size_t>(nullity)] == 0) ++nullity;
  auto sign_changes = [](const std::vector<Rational>& v) {
    int changes = 0, last = 0;
    for (const auto& x : v) {
      const int s = sgn(x);
      if (s == 0) continue;
      if (last != 0 && s != last) ++changes;
      last = s;
    }
    return changes;
  };
  const int positive = sign_changes(c);
  std::vector<Rational> reflected(c);  // p(-x)
  for (std::size_t k = 1; k < reflected.size(); k += 2) reflected[k] = -reflected[k];
  const int negative = sign_changes(reflected);
  return IndexReport{negative, nullity, positive, n};
}

/// A symmetric B with J*B linearly stable: diagonal 2x2 planes
/// (b_k, b_{n+k}) that are either zero (a J-invariant kernel) or of one
/// strict sign (an imaginary pair), then congruence by the symplectic shear
/// [[I, 0], [C, I]] with C symmetric.
inline RatMatrix linearly_stable_instance(std::mt19937_64& rng, std::size_t n, bool shear = true) {
  std::uniform_int_distribution<int> kind(0, 4), mag(1, 4);
  std::vector<Rational> d(2 * n, Rational(0));
  for (std::size_t k = 0; k < n; ++k) {
    const int t = kind(rng);
    if (t == 0) continue;
    const int sign = t <= 2 ? 1 : -1;
    d[k] = make_rational(sign * mag(rng), mag(rng));
    d[n + k] = make_rational(sign * mag(rng), mag(rng));
  }
  RatMatrix b = RatMatrix::diagonal(d);
  if (!shear) return b;
  RatMatrix s = RatMatrix::identity(2 * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) s(n + i, j) = s(n + j, i) = small_rational(rng, 2, 2);
  return s.transpose() * b * s;
}

inline numeric::VectorXd random_positions(std::mt19937_64& rng, int n, double min_sep = 0.2) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  numeric::VectorXd q(2 * n);
  for (;;) {
    for (int i = 0; i < 2 * n; ++i) q(i) = u(rng);
    bool ok = true;
    for (int i = 0; i < n && ok; ++i)
      for (int j = i + 1; j < n && ok; ++j)
        ok = std::hypot(q(2 * i) - q(2 * j), q(2 * i + 1) - q(2 * j + 1)) > min_sep;
    if (ok) return q;
  }
}

}  // namespace relequil::testing
