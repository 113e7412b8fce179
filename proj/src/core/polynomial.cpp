#include "relequil/polynomial.hpp"
#include "relequil/numeric.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace relequil {

Polynomial::Polynomial(std::vector<Rational> coefficients) : coeffs_(std::move(coefficients)) { trim(); }

Polynomial Polynomial::constant(const Rational& c) { return Polynomial({c}); }

Polynomial Polynomial::linear_root(const Rational& root) { return Polynomial({Rational(-root), Rational(1)}); }

Polynomial Polynomial::monomial(int degree, const Rational& c) {
  std::vector<Rational> v(static_cast<std::size_t>(degree) + 1, Rational(0));
  v.back() = c;
  return Polynomial(std::move(v));
}

void Polynomial::trim() {
  while (!coeffs_.empty() && sgn(coeffs_.back()) == 0) coeffs_.pop_back();
}

Rational Polynomial::coefficient(int k) const {
  if (k < 0 || k > degree()) return Rational(0);
  return coeffs_[static_cast<std::size_t>(k)];
}

Rational Polynomial::leading() const { return is_zero() ? Rational(0) : coeffs_.back(); }

Rational Polynomial::operator()(const Rational& x) const {
  Rational acc(0);
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

std::complex<double> Polynomial::operator()(std::complex<double> x) const {
  std::complex<double> acc(0.0);
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + it->get_d();
  return acc;
}

double Polynomial::evaluate(double x) const {
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + it->get_d();
  return acc;
}

Polynomial Polynomial::derivative() const {
  if (degree() <= 0) return {};
  std::vector<Rational> d(coeffs_.size() - 1);
  for (std::size_t k = 1; k < coeffs_.size(); ++k) d[k - 1] = coeffs_[k] * static_cast<long>(k);
  return Polynomial(std::move(d));
}

Polynomial Polynomial::monic() const {
  if (is_zero()) return {};
  Rational lc = leading();
  std::vector<Rational> v(coeffs_);
  for (auto& c : v) c /= lc;
  return Polynomial(std::move(v));
}

bool Polynomial::is_even() const {
  for (std::size_t k = 1; k < coeffs_.size(); k += 2)
    if (sgn(coeffs_[k]) != 0) return false;
  return true;
}

Polynomial Polynomial::even_part_in_square() const {
  if (!is_even()) throw std::invalid_argument("polynomial is not even");
  std::vector<Rational> v;
  for (std::size_t k = 0; k < coeffs_.size(); k += 2) v.push_back(coeffs_[k]);
  return Polynomial(std::move(v));
}

Polynomial Polynomial::scale_argument(const Rational& c) const {
  std::vector<Rational> v(coeffs_);
  Rational power(1);
  for (auto& coef : v) {
    coef *= power;
    power *= c;
  }
  return Polynomial(std::move(v));
}

Polynomial Polynomial::compose_square() const {
  if (is_zero()) return {};
  std::vector<Rational> v(2 * coeffs_.size() - 1, Rational(0));
  for (std::size_t k = 0; k < coeffs_.size(); ++k) v[2 * k] = coeffs_[k];
  return Polynomial(std::move(v));
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size(), Rational(0));
  for (std::size_t k = 0; k < o.coeffs_.size(); ++k) coeffs_[k] += o.coeffs_[k];
  trim();
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size(), Rational(0));
  for (std::size_t k = 0; k < o.coeffs_.size(); ++k) coeffs_[k] -= o.coeffs_[k];
  trim();
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<Rational> v(a.coeffs_.size() + b.coeffs_.size() - 1, Rational(0));
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) v[i + j] += a.coeffs_[i] * b.coeffs_[j];
  return Polynomial(std::move(v));
}

Polynomial operator*(Polynomial a, const Rational& s) {
  for (auto& c : a.coeffs_) c *= s;
  a.trim();
  return a;
}

std::pair<Polynomial, Polynomial> Polynomial::divmod(const Polynomial& a, const Polynomial& b) {
  if (b.is_zero()) throw std::domain_error("polynomial division by zero");
  if (a.degree() < b.degree()) return {Polynomial{}, a};
  std::vector<Rational> rem(a.coeffs_);
  std::vector<Rational> quot(static_cast<std::size_t>(a.degree() - b.degree()) + 1, Rational(0));
  const Rational& lb = b.coeffs_.back();
  for (int k = a.degree() - b.degree(); k >= 0; --k) {
    Rational factor = rem[static_cast<std::size_t>(k + b.degree())] / lb;
    quot[static_cast<std::size_t>(k)] = factor;
    if (sgn(factor) == 0) continue;
    for (int j = 0; j <= b.degree(); ++j)
      rem[static_cast<std::size_t>(k + j)] -= factor * b.coeffs_[static_cast<std::size_t>(j)];
  }
  rem.resize(static_cast<std::size_t>(b.degree()));
  return {Polynomial(std::move(quot)), Polynomial(std::move(rem))};
}

std::string Polynomial::to_string(const std::string& var) const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int k = degree(); k >= 0; --k) {
    const Rational& c = coeffs_[static_cast<std::size_t>(k)];
    if (sgn(c) == 0) continue;
    Rational mag = abs(c);
    if (first) {
      if (sgn(c) < 0) os << "-";
    } else {
      os << (sgn(c) < 0 ? " - " : " + ");
    }
    first = false;
    bool unit = mag == 1;
    if (k == 0 || !unit) os << relequil::to_string(mag);
    if (k > 0) {
      if (!unit) os << "*";
      os << var;
      if (k > 1) os << "^" << k;
    }
  }
  return os.str();
}

Polynomial gcd(Polynomial a, Polynomial b) {
  while (!b.is_zero()) {
    Polynomial r = Polynomial::divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

Polynomial square_free_part(const Polynomial& p) {
  if (p.degree() <= 0) return p.is_zero() ? Polynomial{} : Polynomial::constant(Rational(1));
  Polynomial g = gcd(p, p.derivative());
  return Polynomial::divmod(p, g).first.monic();
}

std::vector<std::pair<Polynomial, int>> square_free_decomposition(const Polynomial& p) {
  std::vector<std::pair<Polynomial, int>> out;
  if (p.degree() <= 0) return out;
  Polynomial f = p.monic();
  Polynomial a0 = gcd(f, f.derivative());
  Polynomial b = Polynomial::divmod(f, a0).first;
  Polynomial c = Polynomial::divmod(f.derivative(), a0).first;
  Polynomial d = c - b.derivative();
  for (int i = 1; b.degree() > 0; ++i) {
    Polynomial a = gcd(b, d);
    if (a.degree() > 0) out.emplace_back(a, i);
    b = Polynomial::divmod(b, a).first;
    c = Polynomial::divmod(d, a).first;
    d = c - b.derivative();
  }
  return out;
}

std::vector<Polynomial> sturm_sequence(const Polynomial& p) {
  std::vector<Polynomial> seq;
  if (p.is_zero()) return seq;
  seq.push_back(p);
  Polynomial d = p.derivative();
  if (d.is_zero()) return seq;
  seq.push_back(d);
  while (true) {
    Polynomial r = Polynomial::divmod(seq[seq.size() - 2], seq.back()).second;
    if (r.is_zero()) break;
    // Scale by a positive constant to keep coefficients small; signs matter, magnitudes do not.
    Rational lc = abs(r.leading());
    seq.push_back(r * Rational(-1 / lc));
  }
  return seq;
}

namespace {

int variations(const std::vector<int>& signs) {
  int count = 0;
  int last = 0;
  for (int s : signs) {
    if (s == 0) continue;
    if (last != 0 && s != last) ++count;
    last = s;
  }
  return count;
}

int variations_at(const std::vector<Polynomial>& seq, const Rational& x) {
  std::vector<int> signs;
  signs.reserve(seq.size());
  for (const auto& q : seq) signs.push_back(sgn(q(x)));
  return variations(signs);
}

int variations_at_infinity(const std::vector<Polynomial>& seq, bool positive) {
  std::vector<int> signs;
  for (const auto& q : seq) {
    int s = sgn(q.leading());
    if (!positive && q.degree() % 2 == 1) s = -s;
    signs.push_back(s);
  }
  return variations(signs);
}

}  // namespace

int count_real_roots(const std::vector<Polynomial>& sturm, const Rational& a, const Rational& b) {
  if (sturm.empty()) throw std::invalid_argument("root count of the zero polynomial");
  if (b < a) return 0;
  return variations_at(sturm, a) - variations_at(sturm, b);
}

int count_real_roots(const Polynomial& p, const Rational& a, const Rational& b) {
  return count_real_roots(sturm_sequence(p), a, b);
}

int count_real_roots(const Polynomial& p) {
  auto seq = sturm_sequence(p);
  if (seq.empty()) throw std::invalid_argument("root count of the zero polynomial");
  return variations_at_infinity(seq, false) - variations_at_infinity(seq, true);
}

int count_real_roots_below(const Polynomial& p, const Rational& b) {
  auto seq = sturm_sequence(p);
  if (seq.empty()) throw std::invalid_argument("root count of the zero polynomial");
  return variations_at_infinity(seq, false) - variations_at(seq, b);
}

Rational cauchy_root_bound(const Polynomial& p) {
  if (p.degree() <= 0) return Rational(1);
  Rational lc = abs(p.leading());
  Rational m(0);
  for (int k = 0; k < p.degree(); ++k) m = std::max(m, Rational(abs(p.coefficient(k)) / lc));
  return m + 1;
}

double RootInterval::midpoint() const {
  if (exact) return lo.get_d();
  return Rational((lo + hi) / 2).get_d();
}

Rational simplest_rational_between(const Rational& lo, const Rational& hi) {
  if (hi < lo) return simplest_rational_between(hi, lo);
  if (sgn(lo) <= 0 && sgn(hi) >= 0) return Rational(0);
  if (sgn(hi) < 0) return Rational(-simplest_rational_between(Rational(-hi), Rational(-lo)));
  Integer fl;
  mpz_fdiv_q(fl.get_mpz_t(), lo.get_num_mpz_t(), lo.get_den_mpz_t());
  if (Rational(fl) == lo) return lo;
  Rational ceil_lo(fl + 1);
  if (ceil_lo <= hi) return ceil_lo;
  Rational inner = simplest_rational_between(Rational(1 / (hi - fl)), Rational(1 / (lo - fl)));
  Rational r = Rational(fl) + 1 / inner;
  r.canonicalize();
  return r;
}

namespace {

void isolate(const Polynomial& p, const std::vector<Polynomial>& seq, Rational lo, Rational hi, int count,
             std::vector<RootInterval>& out) {
  if (count == 0) return;
  if (count == 1) {
    if (sgn(p(hi)) == 0) {
      out.push_back({hi, hi, true});
    } else {
      out.push_back({lo, hi, false});
    }
    return;
  }
  Rational mid = (lo + hi) / 2;
  int left = count_real_roots(seq, lo, mid);
  isolate(p, seq, lo, mid, left, out);
  isolate(p, seq, mid, hi, count - left, out);
}

}  // namespace

std::vector<RootInterval> isolate_real_roots(const Polynomial& p, const Rational& lo, const Rational& hi) {
  std::vector<RootInterval> out;
  if (p.degree() <= 0) return out;
  Polynomial sf = square_free_part(p);
  auto seq = sturm_sequence(sf);
  isolate(sf, seq, lo, hi, count_real_roots(seq, lo, hi), out);
  return out;
}

std::vector<RootInterval> isolate_real_roots(const Polynomial& p) {
  if (p.degree() <= 0) return {};
  Rational b = cauchy_root_bound(p);
  return isolate_real_roots(p, Rational(-b), b);
}

RootInterval refine_root(const Polynomial& p, RootInterval interval, const Rational& width) {
  if (interval.exact) return interval;
  Polynomial sf = square_free_part(p);
  auto seq = sturm_sequence(sf);
  for (int step = 0; interval.hi - interval.lo > width; ++step) {
    if (step % 4 == 0) {
      Rational candidate = simplest_rational_between(interval.lo, interval.hi);
      if (candidate > interval.lo && sgn(sf(candidate)) == 0) return {candidate, candidate, true};
    }
    Rational mid = (interval.lo + interval.hi) / 2;
    if (sgn(sf(mid)) == 0) return {mid, mid, true};
    if (count_real_roots(seq, interval.lo, mid) == 1) {
      interval.hi = mid;
    } else {
      interval.lo = mid;
    }
  }
  if (sgn(sf(interval.hi)) == 0) return {interval.hi, interval.hi, true};
  return interval;
}

std::vector<std::complex<double>> numeric_roots(const Polynomial& p) {
  std::vector<std::complex<double>> roots;
  int n = p.degree();
  if (n <= 0) return roots;
  // Strip exact zero roots first: they are reported exactly.
  int zeros = 0;
  while (sgn(p.coefficient(zeros)) == 0) ++zeros;
  roots.assign(static_cast<std::size_t>(zeros), std::complex<double>(0.0));
  int m = n - zeros;
  if (m == 0) return roots;
  std::vector<double> c(static_cast<std::size_t>(m) + 1);
  Rational lc = p.leading();
  for (int k = 0; k <= m; ++k) c[static_cast<std::size_t>(k)] = Rational(p.coefficient(k + zeros) / lc).get_d();
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(m, m);
  for (int i = 1; i < m; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < m; ++i) companion(i, m - 1) = -c[static_cast<std::size_t>(i)];
  const Eigen::VectorXcd approx = numeric::eigenvalues(companion);
  using cld = std::complex<long double>;
  for (int i = 0; i < m; ++i) {
    cld z(approx(i).real(), approx(i).imag());
    for (int it = 0; it < 3; ++it) {
      cld f = 0, df = 0;
      for (int k = m; k >= 0; --k) {
        df = df * z + f;
        f = f * z + static_cast<long double>(c[static_cast<std::size_t>(k)]);
      }
      if (std::abs(df) == 0.0L) break;
      cld step = f / df;
      // Newton is unreliable near multiple roots; accept only contracting steps.
      if (!(std::abs(step) < 1e-6L * (1.0L + std::abs(z)))) break;
      z -= step;
    }
    roots.emplace_back(static_cast<double>(z.real()), static_cast<double>(z.imag()));
  }
  return roots;
}

Polynomial interpolate(const std::vector<Rational>& xs, const std::vector<Rational>& ys) {
  if (xs.size() != ys.size() || xs.empty()) throw std::invalid_argument("interpolation needs matching samples");
  const std::size_t n = xs.size();
  std::vector<Rational> dd(ys);
  for (std::size_t level = 1; level < n; ++level)
    for (std::size_t i = n - 1; i >= level; --i) {
      dd[i] = (dd[i] - dd[i - 1]) / (xs[i] - xs[i - level]);
      if (i == level) break;
    }
  Polynomial result = Polynomial::constant(dd[n - 1]);
  for (std::size_t k = n - 1; k-- > 0;) {
    result = result * Polynomial::linear_root(xs[k]) + Polynomial::constant(dd[k]);
  }
  return result;
}

}  // namespace relequil
