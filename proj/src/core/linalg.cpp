#include "relequil/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace relequil {

namespace {

void require_square(const RatMatrix& a, const char* what) {
  if (!a.is_square()) {
    std::ostringstream os;
    os << what << ": expected a square matrix, got " << a.rows() << "x" << a.cols();
    throw ShapeError(os.str());
  }
}

}  // namespace

std::string to_string(const IndexReport& r) {
  std::ostringstream os;
  os << "(morse_index " << r.morse_index << ", nullity " << r.nullity << ", coindex " << r.coindex << ")";
  return os.str();
}

const char* to_string(Tri t) {
  switch (t) {
    case Tri::no: return "no";
    case Tri::yes: return "yes";
    case Tri::indeterminate: return "indeterminate";
  }
  return "indeterminate";
}

int total_multiplicity(const Spectrum& s) {
  int total = 0;
  for (const auto& e : s) total += e.multiplicity;
  return total;
}

RowEchelon row_reduce(const RatMatrix& a) {
  RowEchelon out{a, {}};
  RatMatrix& m = out.reduced;
  std::size_t row = 0;
  for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
    std::size_t pivot = row;
    while (pivot < m.rows() && sgn(m(pivot, col)) == 0) ++pivot;
    if (pivot == m.rows()) continue;
    if (pivot != row)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(pivot, j), m(row, j));
    Rational inv = 1 / m(row, col);
    for (std::size_t j = col; j < m.cols(); ++j) m(row, j) *= inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == row || sgn(m(i, col)) == 0) continue;
      Rational f = m(i, col);
      for (std::size_t j = col; j < m.cols(); ++j) m(i, j) -= f * m(row, j);
    }
    out.pivots.push_back(col);
    ++row;
  }
  return out;
}

std::size_t rank(const RatMatrix& a) { return row_reduce(a).pivots.size(); }

RatSubspace kernel(const RatMatrix& a) {
  RowEchelon e = row_reduce(a);
  std::vector<bool> is_pivot(a.cols(), false);
  for (auto p : e.pivots) is_pivot[p] = true;
  std::vector<std::size_t> free_cols;
  for (std::size_t j = 0; j < a.cols(); ++j)
    if (!is_pivot[j]) free_cols.push_back(j);
  RatMatrix basis(a.cols(), free_cols.size());
  for (std::size_t k = 0; k < free_cols.size(); ++k) {
    std::size_t f = free_cols[k];
    basis(f, k) = 1;
    for (std::size_t r = 0; r < e.pivots.size(); ++r) basis(e.pivots[r], k) = -e.reduced(r, f);
  }
  return {a.cols(), basis};
}

RatSubspace column_space(const RatMatrix& a) {
  RowEchelon e = row_reduce(a);
  RatMatrix basis(a.rows(), e.pivots.size());
  for (std::size_t k = 0; k < e.pivots.size(); ++k) basis.set_col(k, a.col(e.pivots[k]));
  return {a.rows(), basis};
}

RatSubspace orthogonal_complement(const RatSubspace& w) {
  if (w.dim() == 0) return {w.ambient, RatMatrix::identity(w.ambient)};
  return kernel(w.basis.transpose());
}

bool is_subspace_of(const RatSubspace& inner, const RatSubspace& outer) {
  if (inner.dim() == 0) return true;
  if (outer.dim() == 0) return inner.basis.is_zero();
  return rank(hconcat(outer.basis, inner.basis)) == rank(outer.basis);
}

bool is_invariant(const RatSubspace& w, const RatMatrix& a) {
  if (w.dim() == 0) return true;
  return is_subspace_of({w.ambient, a * w.basis}, w);
}

Rational determinant(const RatMatrix& a) {
  require_square(a, "determinant");
  const std::size_t n = a.rows();
  if (n == 0) return Rational(1);
  // Clear denominators row by row, then run Bareiss over the integers.
  std::vector<Integer> m(n * n);
  Rational scale(1);
  for (std::size_t i = 0; i < n; ++i) {
    Integer l(1);
    for (std::size_t j = 0; j < n; ++j) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), a(i, j).get_den_mpz_t());
    scale *= l;
    for (std::size_t j = 0; j < n; ++j) m[i * n + j] = a(i, j).get_num() * (l / a(i, j).get_den());
  }
  int sign_flip = 1;
  Integer prev(1);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k * n + k] == 0) {
      std::size_t p = k + 1;
      while (p < n && m[p * n + k] == 0) ++p;
      if (p == n) return Rational(0);
      for (std::size_t j = 0; j < n; ++j) std::swap(m[k * n + j], m[p * n + j]);
      sign_flip = -sign_flip;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        Integer v = m[i * n + j] * m[k * n + k] - m[i * n + k] * m[k * n + j];
        mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
        m[i * n + j] = v;
      }
    }
    prev = m[k * n + k];
  }
  Rational det(m[n * n - 1] * sign_flip, 1);
  det /= scale;
  return det;
}

std::optional<RatMatrix> inverse(const RatMatrix& a) {
  require_square(a, "inverse");
  const std::size_t n = a.rows();
  RowEchelon e = row_reduce(hconcat(a, RatMatrix::identity(n)));
  if (e.pivots.size() < n || e.pivots[n - 1] != n - 1) return std::nullopt;
  return e.reduced.cols_range(n, n);
}

std::optional<RatVector> solve(const RatMatrix& a, const RatVector& b) {
  if (b.size() != a.rows()) throw ShapeError("solve: right-hand side length mismatch");
  RowEchelon e = row_reduce(hconcat(a, RatMatrix::column(b)));
  if (!e.pivots.empty() && e.pivots.back() == a.cols()) return std::nullopt;
  RatVector x(a.cols(), Rational(0));
  for (std::size_t r = 0; r < e.pivots.size(); ++r) x[e.pivots[r]] = e.reduced(r, a.cols());
  return x;
}

Polynomial characteristic_polynomial(const RatMatrix& a) {
  require_square(a, "characteristic_polynomial");
  const std::size_t n = a.rows();
  // c_n = 1; M_k = A M_{k-1} + c_{n-k+1} I; c_{n-k} = -tr(A M_k) / k
  std::vector<Rational> c(n + 1, Rational(0));
  c[n] = 1;
  RatMatrix mk(n, n);
  for (std::size_t k = 1; k <= n; ++k) {
    RatMatrix next = a * mk;
    for (std::size_t i = 0; i < n; ++i) next(i, i) += c[n - k + 1];
    RatMatrix am = a * next;
    Rational tr(0);
    for (std::size_t i = 0; i < n; ++i) tr += am(i, i);
    c[n - k] = -tr / static_cast<long>(k);
    mk = std::move(next);
  }
  return Polynomial(std::move(c));
}

Polynomial minimal_polynomial(const RatMatrix& a) {
  require_square(a, "minimal_polynomial");
  const std::size_t n = a.rows();
  if (n == 0) return Polynomial::constant(Rational(1));
  auto flatten = [n](const RatMatrix& m) {
    RatVector v(n * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) v[i * n + j] = m(i, j);
    return v;
  };
  std::vector<RatVector> powers{flatten(RatMatrix::identity(n))};
  RatMatrix current = RatMatrix::identity(n);
  for (std::size_t k = 1; k <= n; ++k) {
    current = current * a;
    RatVector target = flatten(current);
    RatMatrix stacked(n * n, powers.size());
    for (std::size_t j = 0; j < powers.size(); ++j) stacked.set_col(j, powers[j]);
    if (auto coeffs = solve(stacked, target)) {
      std::vector<Rational> m(k + 1, Rational(0));
      for (std::size_t j = 0; j < k; ++j) m[j] = -(*coeffs)[j];
      m[k] = 1;
      return Polynomial(std::move(m));
    }
    powers.push_back(std::move(target));
  }
  throw std::logic_error("minimal polynomial exceeded the matrix dimension");
}

RatMatrix evaluate(const Polynomial& p, const RatMatrix& a) {
  require_square(a, "evaluate");
  RatMatrix acc(a.rows(), a.cols());
  const auto& c = p.coefficients();
  for (auto it = c.rbegin(); it != c.rend(); ++it) {
    acc = acc * a;
    for (std::size_t i = 0; i < a.rows(); ++i) acc(i, i) += *it;
  }
  return acc;
}

LdltFactorization ldlt(const RatMatrix& b) {
  require_square(b, "ldlt");
  if (!b.is_symmetric()) throw std::invalid_argument("ldlt: matrix is not symmetric");
  const std::size_t n = b.rows();
  RatMatrix s = b;
  RatMatrix lower = RatMatrix::identity(n);
  RatMatrix d(n, n);
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::vector<int> blocks;

  auto swap_index = [&](std::size_t i, std::size_t j, std::size_t k) {
    if (i == j) return;
    for (std::size_t c = 0; c < n; ++c) std::swap(s(i, c), s(j, c));
    for (std::size_t r = 0; r < n; ++r) std::swap(s(r, i), s(r, j));
    for (std::size_t c = 0; c < k; ++c) std::swap(lower(i, c), lower(j, c));
    std::swap(perm[i], perm[j]);
  };

  std::size_t k = 0;
  while (k < n) {
    // 1x1 pivot: the largest nonzero diagonal entry in magnitude.
    std::size_t pivot = n;
    for (std::size_t i = k; i < n; ++i)
      if (sgn(s(i, i)) != 0 && (pivot == n || abs(s(i, i)) > abs(s(pivot, pivot)))) pivot = i;
    if (pivot != n) {
      swap_index(k, pivot, k);
      const Rational dk = s(k, k);
      d(k, k) = dk;
      for (std::size_t i = k + 1; i < n; ++i) lower(i, k) = s(i, k) / dk;
      for (std::size_t i = k + 1; i < n; ++i) {
        if (sgn(lower(i, k)) == 0) continue;
        for (std::size_t j = k + 1; j < n; ++j) s(i, j) -= lower(i, k) * s(k, j);
      }
      for (std::size_t i = k + 1; i < n; ++i) s(i, k) = s(k, i) = 0;
      blocks.push_back(1);
      ++k;
      continue;
    }
    // Zero diagonal: 2x2 pivot on a nonzero off-diagonal entry.
    std::size_t pi = n, pj = n;
    for (std::size_t i = k; i < n && pi == n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (sgn(s(i, j)) != 0) {
          pi = i;
          pj = j;
          break;
        }
    if (pi == n) {
      // Remaining Schur complement is zero.
      for (; k < n; ++k) blocks.push_back(1);
      break;
    }
    swap_index(k, pi, k);
    if (pj == k) pj = pi;
    swap_index(k + 1, pj, k);
    const Rational a = s(k, k + 1);
    d(k, k + 1) = d(k + 1, k) = a;
    // E = [[0, a], [a, 0]], E^{-1} = [[0, 1/a], [1/a, 0]]
    const Rational inv_a = 1 / a;
    for (std::size_t i = k + 2; i < n; ++i) {
      lower(i, k) = s(i, k + 1) * inv_a;
      lower(i, k + 1) = s(i, k) * inv_a;
    }
    for (std::size_t i = k + 2; i < n; ++i)
      for (std::size_t j = k + 2; j < n; ++j)
        s(i, j) -= lower(i, k) * s(k, j) + lower(i, k + 1) * s(k + 1, j);
    for (std::size_t i = k + 2; i < n; ++i) {
      s(i, k) = s(k, i) = 0;
      s(i, k + 1) = s(k + 1, i) = 0;
    }
    blocks.push_back(2);
    k += 2;
  }
  return {perm, lower, d, blocks};
}

IndexReport inertia(const RatMatrix& b) {
  require_square(b, "inertia");
  if (!b.is_symmetric()) throw std::invalid_argument("inertia: matrix is not symmetric");
  LdltFactorization f = ldlt(b);
  IndexReport r;
  r.subspace_dim = static_cast<int>(b.rows());
  std::size_t k = 0;
  for (int size : f.block_sizes) {
    if (size == 1) {
      int s = sgn(f.block_diagonal(k, k));
      if (s < 0) ++r.morse_index;
      else if (s > 0) ++r.coindex;
      else ++r.nullity;
    } else {
      // [[0, a], [a, 0]] has eigenvalues +-|a|.
      ++r.morse_index;
      ++r.coindex;
    }
    k += static_cast<std::size_t>(size);
  }
  return r;
}

namespace {

void sort_spectrum(Spectrum& s) {
  std::sort(s.begin(), s.end(), [](const Eigenvalue& a, const Eigenvalue& b) {
    if (a.value.real() != b.value.real()) return a.value.real() < b.value.real();
    return a.value.imag() < b.value.imag();
  });
}

}  // namespace

Spectrum complex_spectrum(const RatMatrix& a) {
  require_square(a, "complex_spectrum");
  Spectrum out;
  Polynomial p = characteristic_polynomial(a);
  const Rational width = Rational(1, Integer(1) << 80);
  for (const auto& [factor_in, mult] : square_free_decomposition(p)) {
    Polynomial factor = factor_in;
    if (sgn(factor.coefficient(0)) == 0) {
      out.push_back({{0.0, 0.0}, mult, 0.0, true, true});
      factor = Polynomial::divmod(factor, Polynomial::monomial(1)).first;
    }
    if (factor.degree() <= 0) continue;
    auto real_roots = isolate_real_roots(factor);
    for (auto iv : real_roots) {
      iv = refine_root(factor, iv, width);
      double radius = iv.exact ? 0.0 : Rational((iv.hi - iv.lo) / 2).get_d();
      out.push_back({{iv.midpoint(), 0.0}, mult, radius, true, iv.exact});
    }
    const int complex_count = factor.degree() - static_cast<int>(real_roots.size());
    if (complex_count == 0) continue;
    auto approx = numeric_roots(factor);
    // The complex_count roots farthest from the real axis are the non-real
    // ones; keep those in the upper half plane and mirror them.
    std::sort(approx.begin(), approx.end(),
              [](auto x, auto y) { return std::abs(x.imag()) > std::abs(y.imag()); });
    std::vector<std::complex<double>> upper;
    for (int i = 0; i < complex_count; ++i)
      if (approx[static_cast<std::size_t>(i)].imag() > 0) upper.push_back(approx[static_cast<std::size_t>(i)]);
    if (static_cast<int>(upper.size()) * 2 != complex_count) {
      upper.clear();
      for (int i = 0; i < complex_count; i += 2) upper.push_back(approx[static_cast<std::size_t>(i)]);
      for (auto& z : upper) z = {z.real(), std::abs(z.imag())};
    }
    Polynomial dfactor = factor.derivative();
    for (auto z : upper) {
      double radius = static_cast<double>(factor.degree()) * std::abs(factor(z) / dfactor(z));
      out.push_back({z, mult, radius, false, false});
      out.push_back({std::conj(z), mult, radius, false, false});
    }
  }
  sort_spectrum(out);
  return out;
}

SemisimpleReport is_semisimple(const RatMatrix& a) {
  require_square(a, "is_semisimple");
  SemisimpleReport report;
  Polynomial m = minimal_polynomial(a);
  Polynomial g = gcd(m, m.derivative());
  std::ostringstream cert;
  cert << "minimal polynomial " << m.to_string("x") << "; gcd(m, m') = " << g.to_string("x");
  report.certificate = cert.str();
  if (g.degree() <= 0) {
    report.semisimple = Tri::yes;
    return report;
  }
  report.semisimple = Tri::no;
  // Every root of g is a defective eigenvalue; prefer an exact rational one.
  auto real_roots = isolate_real_roots(g);
  if (!real_roots.empty()) {
    RootInterval iv = refine_root(g, real_roots.front(), Rational(1, Integer(1) << 80));
    report.defective_eigenvalue = std::complex<double>(iv.midpoint(), 0.0);
  } else {
    auto roots = numeric_roots(g);
    std::complex<double> z = roots.front();
    report.defective_eigenvalue = std::complex<double>(z.real(), std::abs(z.imag()));
  }
  return report;
}

RatMatrix symplectic_reduction(const RatMatrix& omega) {
  require_square(omega, "symplectic_reduction");
  const std::size_t dim = omega.rows();
  if (dim % 2 != 0) throw ShapeError("symplectic_reduction: odd dimension " + std::to_string(dim));
  if (!omega.is_skew()) throw std::invalid_argument("symplectic_reduction: matrix is not skew-symmetric");
  const std::size_t n = dim / 2;

  auto form = [&](const RatVector& x, const RatVector& y) {
    Rational acc(0);
    for (std::size_t i = 0; i < dim; ++i) {
      if (sgn(x[i]) == 0) continue;
      for (std::size_t j = 0; j < dim; ++j) acc += x[i] * omega(i, j) * y[j];
    }
    return acc;
  };

  // Columns e_k, f_k of P with P^T Omega P = J: form(e_k, f_k) = -1.
  std::vector<RatVector> pool;
  for (std::size_t i = 0; i < dim; ++i) {
    RatVector v(dim, Rational(0));
    v[i] = 1;
    pool.push_back(std::move(v));
  }
  RatMatrix p(dim, dim);
  for (std::size_t k = 0; k < n; ++k) {
    RatVector x = pool.front();
    std::size_t partner = 0;
    Rational pairing(0);
    for (std::size_t j = 1; j < pool.size(); ++j) {
      pairing = form(x, pool[j]);
      if (sgn(pairing) != 0) {
        partner = j;
        break;
      }
    }
    if (partner == 0) throw std::domain_error("symplectic_reduction: matrix is singular");
    RatVector y = pool[partner];
    Rational s = -1 / pairing;
    for (auto& v : y) v *= s;
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(partner));
    pool.erase(pool.begin());
    for (auto& v : pool) {
      // v' = v - form(y, v) x + form(x, v) y keeps v' skew-orthogonal to x and y.
      Rational a = form(y, v);
      Rational bcoef = form(x, v);
      for (std::size_t i = 0; i < dim; ++i) v[i] += -a * x[i] + bcoef * y[i];
    }
    p.set_col(k, x);
    p.set_col(n + k, y);
  }
  auto inv = inverse(p);
  if (!inv) throw std::domain_error("symplectic_reduction: matrix is singular");
  return inv->transpose();
}

RatMatrix restrict_form(const RatMatrix& b, const RatSubspace& w) {
  require_square(b, "restrict_form");
  if (w.ambient != b.rows() || (w.dim() > 0 && w.basis.rows() != b.rows()))
    throw ShapeError("restrict_form: subspace ambient dimension does not match the form");
  if (w.dim() == 0) return RatMatrix(0, 0);
  return w.basis.transpose() * b * w.basis;
}

double norm_inf(const RatMatrix& a) {
  double best = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    Rational row(0);
    for (std::size_t j = 0; j < a.cols(); ++j) row += abs(a(i, j));
    best = std::max(best, row.get_d());
  }
  return best;
}

}  // namespace relequil
