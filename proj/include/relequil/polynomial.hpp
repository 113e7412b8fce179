#pragma once

#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "relequil/rational.hpp"

namespace relequil {

/// Univariate polynomial over the rationals, coefficients stored from the
/// constant term upward. The zero polynomial has no coefficients and
/// degree -1. Trailing zero coefficients are always trimmed.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<Rational> coefficients);
  static Polynomial constant(const Rational& c);
  /// x - root
  static Polynomial linear_root(const Rational& root);
  static Polynomial monomial(int degree, const Rational& c = Rational(1));

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  const std::vector<Rational>& coefficients() const { return coeffs_; }
  Rational coefficient(int k) const;
  Rational leading() const;

  Rational operator()(const Rational& x) const;
  std::complex<double> operator()(std::complex<double> x) const;
  double evaluate(double x) const;

  Polynomial derivative() const;
  Polynomial monic() const;

  /// True when every odd-degree coefficient vanishes.
  bool is_even() const;
  /// For an even polynomial p(x) = r(x^2), returns r.
  Polynomial even_part_in_square() const;
  /// p(x) -> p(c * x)
  Polynomial scale_argument(const Rational& c) const;
  /// p(x) -> p(x^2)
  Polynomial compose_square() const;

  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(Polynomial a, const Rational& s);
  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.coeffs_ == b.coeffs_; }

  /// Euclidean division: a = q*b + r with deg r < deg b.
  static std::pair<Polynomial, Polynomial> divmod(const Polynomial& a, const Polynomial& b);

  std::string to_string(const std::string& var = "x") const;

 private:
  void trim();
  std::vector<Rational> coeffs_;
};

/// Monic greatest common divisor; gcd(0, 0) = 0.
Polynomial gcd(Polynomial a, Polynomial b);

/// p / gcd(p, p'), made monic: same roots as p, each simple.
Polynomial square_free_part(const Polynomial& p);

/// Yun's algorithm. Returns (f_k, k) with p = lc * prod f_k^k, each f_k monic,
/// square-free and pairwise coprime; factors equal to 1 are omitted.
std::vector<std::pair<Polynomial, int>> square_free_decomposition(const Polynomial& p);

/// Canonical Sturm chain of a polynomial (p, p', -rem, ...).
std::vector<Polynomial> sturm_sequence(const Polynomial& p);

/// Number of distinct real roots of p in the half-open interval (a, b].
int count_real_roots(const std::vector<Polynomial>& sturm, const Rational& a, const Rational& b);
int count_real_roots(const Polynomial& p, const Rational& a, const Rational& b);
/// Number of distinct real roots of p on the whole real line.
int count_real_roots(const Polynomial& p);
/// Number of distinct real roots in (-inf, b].
int count_real_roots_below(const Polynomial& p, const Rational& b);

/// Every real root lies strictly inside (-bound, bound).
Rational cauchy_root_bound(const Polynomial& p);

/// An interval (lo, hi] containing exactly one root of a square-free
/// polynomial. When `exact` is set, lo == hi == the root.
struct RootInterval {
  Rational lo;
  Rational hi;
  bool exact = false;

  double midpoint() const;
};

/// Isolates all distinct real roots of p inside (lo, hi], sorted ascending.
/// Rational roots that surface during bisection are reported exactly.
std::vector<RootInterval> isolate_real_roots(const Polynomial& p, const Rational& lo, const Rational& hi);
std::vector<RootInterval> isolate_real_roots(const Polynomial& p);

/// Shrinks an isolating interval of a square-free polynomial until its width
/// is at most `width`, detecting rational roots along the way.
RootInterval refine_root(const Polynomial& p, RootInterval interval, const Rational& width);

/// The rational with smallest denominator in the closed interval [lo, hi].
Rational simplest_rational_between(const Rational& lo, const Rational& hi);

/// Numerical roots (with repetition) through the companion matrix, polished by
/// Newton steps. Used only for reporting approximate locations of roots whose
/// count and multiplicity are already known exactly.
std::vector<std::complex<double>> numeric_roots(const Polynomial& p);

/// Interpolates the unique polynomial of degree < xs.size() through the
/// given exact samples.
Polynomial interpolate(const std::vector<Rational>& xs, const std::vector<Rational>& ys);

}  // namespace relequil
