#include "relequil/spectral_flow.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <thread>

#include "relequil/stability.hpp"

namespace relequil::flow {

namespace {

using cd = std::complex<double>;

MatrixXcd to_complex(const RatMatrix& a) { return numeric::to_eigen(a).cast<cd>(); }

// Realification X + iY -> [[X, -Y], [Y, X]].
RatMatrix embed(const RatMatrix& x, const RatMatrix& y) {
  const std::size_t n = x.rows();
  RatMatrix out(2 * n, 2 * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      out(i, j) = x(i, j);
      out(n + i, n + j) = x(i, j);
      out(i, n + j) = -y(i, j);
      out(n + i, j) = y(i, j);
    }
  return out;
}

void require_symmetric(const RatMatrix& a, const char* what) {
  if (!a.is_square()) throw ShapeError(std::string(what) + ": matrix is not square");
  if (!a.is_symmetric()) throw std::invalid_argument(std::string(what) + ": matrix is not symmetric");
}

template <class F>
void parallel_for(std::size_t count, unsigned threads, F&& body) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t)
    pool.emplace_back([&, t] {
      for (std::size_t i = t; i < count; i += threads) body(i);
    });
  for (auto& th : pool) th.join();
}

Eigen::SelfAdjointEigenSolver<MatrixXcd> hermitian_eigen(const MatrixXcd& h) {
  MatrixXcd s = (h + h.adjoint()) / 2.0;
  return Eigen::SelfAdjointEigenSolver<MatrixXcd>(s);
}

// The `count` eigenvectors of A(theta) whose eigenvalues are closest to zero.
MatrixXcd near_kernel(const SelfAdjointPath& path, double theta, int count) {
  auto es = hermitian_eigen(path.evaluate(theta));
  std::vector<Eigen::Index> order(static_cast<std::size_t>(es.eigenvalues().size()));
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<Eigen::Index>(i);
  std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return std::abs(es.eigenvalues()(a)) < std::abs(es.eigenvalues()(b));
  });
  MatrixXcd k(path.dimension, count);
  for (int c = 0; c < count; ++c) k.col(c) = es.eigenvectors().col(order[static_cast<std::size_t>(c)]);
  return k;
}

void fill_numeric_kernel(Crossing& c, const SelfAdjointPath& path) {
  c.kernel = near_kernel(path, c.location, c.kernel_dim);
  c.crossing_operator = c.kernel.adjoint() * path.derivative(c.location) * c.kernel;
}

IndexReport scaled(const IndexReport& r, int f) {
  return IndexReport{r.morse_index / f, r.nullity / f, r.coindex / f, r.subspace_dim / f};
}

// ---------------------------------------------------------------- exact route

struct ExactContext {
  const SelfAdjointPath::ExactAffine& ex;
  Polynomial det;
  Polynomial square_free;
  std::vector<std::pair<Polynomial, int>> factors;

  RatMatrix at(const Rational& theta) const { return ex.e0 + ex.e1 * theta; }
  int negatives(const Rational& theta) const { return inertia(at(theta)).morse_index; }

  int multiplicity_exact(const Rational& r) const {
    for (const auto& [f, k] : factors)
      if (sgn(f(r)) == 0) return k;
    return 0;
  }
  int multiplicity_in(const Rational& lo, const Rational& hi) const {
    for (const auto& [f, k] : factors)
      if (count_real_roots(f, lo, hi) == 1) return k;
    return 0;
  }
};

ExactContext make_context(const SelfAdjointPath::ExactAffine& ex) {
  const std::size_t m = ex.e0.rows();
  std::vector<Rational> xs, ys;
  for (std::size_t k = 0; k <= m; ++k) {
    Rational x(static_cast<long>(k));
    xs.push_back(x);
    ys.push_back(determinant(ex.e0 + ex.e1 * x));
  }
  ExactContext ctx{ex, interpolate(xs, ys), {}, {}};
  if (ctx.det.is_zero()) throw std::domain_error("path is singular at every parameter");
  ctx.square_free = square_free_part(ctx.det);
  ctx.factors = square_free_decomposition(ctx.det);
  return ctx;
}

// Crossing at a rational parameter: kernel and crossing form computed exactly.
Crossing rational_crossing(const ExactContext& ctx, const SelfAdjointPath& path, const Rational& r) {
  const int f = ctx.ex.embed;
  Crossing c;
  c.exact_location = r;
  c.location = r.get_d();
  c.exact = true;
  c.multiplicity = ctx.multiplicity_exact(r) / f;
  RatSubspace k = kernel(ctx.at(r));
  c.kernel_dim = static_cast<int>(k.dim()) / f;
  c.operator_inertia = scaled(inertia(restrict_form(ctx.ex.e1, k)), f);
  c.signature = c.operator_inertia.signature();
  c.regular = c.operator_inertia.nullity == 0;
  fill_numeric_kernel(c, path);
  return c;
}

// a < root < b with no other root of the square-free part in [a, b].
std::pair<Rational, Rational> bracket(const ExactContext& ctx, RootInterval iv) {
  const Polynomial& sf = ctx.square_free;
  if (iv.exact) {
    Rational delta = iv.hi - iv.lo;
    if (sgn(delta) == 0) delta = 1;
    for (;;) {
      Rational a = iv.lo - delta, b = iv.lo + delta;
      if (count_real_roots(sf, a, b) == 1 && sgn(sf(a)) != 0 && sgn(sf(b)) != 0) return {a, b};
      delta /= 2;
    }
  }
  while (sgn(sf(iv.lo)) == 0 || sgn(sf(iv.hi)) == 0) {
    Rational mid = (iv.lo + iv.hi) / 2;
    if (count_real_roots(sf, iv.lo, mid) == 1) iv.hi = mid;
    else iv.lo = mid;
  }
  return {iv.lo, iv.hi};
}

std::vector<Crossing> exact_crossings(const SelfAdjointPath& path, const numeric::Tolerance& tol) {
  const auto& ex = *path.exact;
  const int f = ex.embed;
  ExactContext ctx = make_context(ex);
  const Rational zero(0);
  std::vector<Crossing> out;

  if (sgn(ctx.det(zero)) == 0) {
    Crossing c = rational_crossing(ctx, path, zero);
    c.at_start = true;
    out.push_back(std::move(c));
  }
  const bool end_root = sgn(ctx.det(ex.end)) == 0;
  for (RootInterval iv : isolate_real_roots(ctx.square_free, zero, ex.end)) {
    if ((iv.exact && iv.lo == ex.end) || (end_root && iv.hi == ex.end)) continue;
    iv = refine_root(ctx.square_free, iv, Rational(1, 1) / Rational(Integer(1) << 60));
    if (iv.exact) {
      out.push_back(rational_crossing(ctx, path, iv.lo));
      continue;
    }
    auto [a, b] = bracket(ctx, iv);
    Crossing c;
    c.location = iv.midpoint();
    c.multiplicity = ctx.multiplicity_in(a, b) / f;
    const int net = (ctx.negatives(a) - ctx.negatives(b)) / f;
    if (std::abs(net) == c.multiplicity) {
      // |sign| <= dim ker <= multiplicity, so equality forces a regular crossing.
      c.exact = true;
      c.regular = true;
      c.kernel_dim = c.multiplicity;
      c.operator_inertia = IndexReport{(c.multiplicity - net) / 2, 0, (c.multiplicity + net) / 2, c.multiplicity};
      c.signature = net;
      fill_numeric_kernel(c, path);
    } else {
      auto es = hermitian_eigen(path.evaluate(c.location));
      const double t = tol.for_matrix(path.evaluate(c.location));
      int dim = 0;
      for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
        if (std::abs(es.eigenvalues()(i)) <= t) ++dim;
      c.kernel_dim = std::max(dim, 1);
      fill_numeric_kernel(c, path);
      c.operator_inertia = numeric::inertia(c.crossing_operator, tol.for_matrix(c.crossing_operator));
      c.signature = c.operator_inertia.signature();
      c.regular = c.kernel_dim == c.multiplicity && c.operator_inertia.nullity == 0;
    }
    out.push_back(std::move(c));
  }
  if (end_root) {
    Crossing c = rational_crossing(ctx, path, ex.end);
    c.at_end = true;
    out.push_back(std::move(c));
  }
  return out;
}

// ---------------------------------------------------------------- float route

struct EndpointInfo {
  int strict_negative = 0;
  std::optional<Crossing> crossing;
};

EndpointInfo float_endpoint(const SelfAdjointPath& path, double theta, const numeric::Tolerance& tol) {
  MatrixXcd h = path.evaluate(theta);
  const double t = tol.for_matrix(h);
  auto es = hermitian_eigen(h);
  EndpointInfo info;
  int dim = 0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    double v = es.eigenvalues()(i);
    if (v < -t) ++info.strict_negative;
    else if (v <= t) ++dim;
  }
  if (dim > 0) {
    Crossing c;
    c.location = theta;
    c.kernel_dim = dim;
    c.multiplicity = dim;
    fill_numeric_kernel(c, path);
    c.operator_inertia = numeric::inertia(c.crossing_operator, tol.for_matrix(path.derivative(theta)));
    c.signature = c.operator_inertia.signature();
    c.regular = c.operator_inertia.nullity == 0;
    info.crossing = std::move(c);
  }
  return info;
}

int negatives_at(const SelfAdjointPath& path, double theta) {
  auto es = Eigen::SelfAdjointEigenSolver<MatrixXcd>(path.evaluate(theta), Eigen::EigenvaluesOnly);
  return static_cast<int>((es.eigenvalues().array() < 0.0).count());
}

struct Leaf {
  double lo, hi;
  int n_lo, n_hi;
};

void bisect(const SelfAdjointPath& path, double a, int na, double b, int nb, int depth, int budget,
            std::vector<Leaf>& leaves) {
  if (na == nb) return;
  const double mid = 0.5 * (a + b);
  if (depth >= budget || mid <= a || mid >= b) {
    leaves.push_back({a, b, na, nb});
    return;
  }
  const int nm = negatives_at(path, mid);
  bisect(path, a, na, mid, nm, depth + 1, budget, leaves);
  bisect(path, mid, nm, b, nb, depth + 1, budget, leaves);
}

struct FloatScan {
  std::vector<Crossing> crossings;
  std::vector<int> net_change;  // parallel to crossings; unused at endpoints
};

FloatScan float_crossings(const SelfAdjointPath& path, const FlowOptions& opts) {
  const double end = path.end;
  EndpointInfo start = float_endpoint(path, 0.0, opts.tol);
  EndpointInfo stop = float_endpoint(path, end, opts.tol);
  const int grid = std::max(opts.grid, 2);

  std::vector<int> counts(static_cast<std::size_t>(grid) + 1);
  parallel_for(counts.size() - 2, opts.threads, [&](std::size_t i) {
    counts[i + 1] = negatives_at(path, end * static_cast<double>(i + 1) / grid);
  });
  counts.front() = start.strict_negative + (start.crossing ? start.crossing->operator_inertia.morse_index : 0);
  counts.back() = stop.strict_negative + (stop.crossing ? stop.crossing->operator_inertia.coindex : 0);

  std::vector<Leaf> leaves;
  for (int k = 0; k < grid; ++k)
    bisect(path, end * k / grid, counts[static_cast<std::size_t>(k)], end * (k + 1) / grid,
           counts[static_cast<std::size_t>(k) + 1], 0, opts.bisection_budget, leaves);

  // Leaves that land on the same parameter belong to one crossing.
  std::vector<Leaf> merged;
  for (const Leaf& l : leaves) {
    if (!merged.empty() && l.lo - merged.back().hi <= 1e-12 * std::max(1.0, end)) {
      merged.back().hi = l.hi;
      merged.back().n_hi = l.n_hi;
    } else {
      merged.push_back(l);
    }
  }

  FloatScan scan;
  if (start.crossing) {
    start.crossing->at_start = true;
    scan.crossings.push_back(*start.crossing);
    scan.net_change.push_back(0);
  }
  for (const Leaf& l : merged) {
    Crossing c;
    c.location = 0.5 * (l.lo + l.hi);
    MatrixXcd h = path.evaluate(c.location);
    const double t = opts.tol.for_matrix(h);
    auto es = hermitian_eigen(h);
    int dim = 0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
      if (std::abs(es.eigenvalues()(i)) <= t) ++dim;
    if (dim == 0) {
      std::ostringstream os;
      os << "eigenvalue sign change near theta = " << c.location << " not resolved to a kernel within "
         << opts.bisection_budget << " bisection steps";
      throw UnresolvedCrossing(os.str());
    }
    c.kernel_dim = dim;
    c.multiplicity = dim;
    fill_numeric_kernel(c, path);
    c.operator_inertia = numeric::inertia(c.crossing_operator, opts.tol.for_matrix(path.derivative(c.location)));
    c.signature = c.operator_inertia.signature();
    const int net = l.n_lo - l.n_hi;
    c.regular = c.operator_inertia.nullity == 0 && c.signature == net;
    scan.crossings.push_back(std::move(c));
    scan.net_change.push_back(net);
  }
  if (stop.crossing) {
    stop.crossing->at_end = true;
    scan.crossings.push_back(*stop.crossing);
    scan.net_change.push_back(0);
  }
  return scan;
}

}  // namespace

// ------------------------------------------------------------------- paths

MatrixXcd krein_form(Eigen::Index n) { return numeric::symplectic_unit(n).cast<cd>() * cd(0.0, 1.0); }

SelfAdjointPath linear_path(const MatrixXcd& a0, const MatrixXcd& a1) {
  if (a0.rows() != a0.cols() || a1.rows() != a1.cols() || a0.rows() != a1.rows())
    throw ShapeError("linear_path: endpoints must be square of equal size");
  SelfAdjointPath p;
  p.dimension = a0.rows();
  MatrixXcd d = a1 - a0;
  p.evaluate = [a0, d](double theta) -> MatrixXcd { return a0 + theta * d; };
  p.derivative = [d](double) -> MatrixXcd { return d; };
  return p;
}

SelfAdjointPath linear_path(const MatrixXd& a0, const MatrixXd& a1) {
  return linear_path(MatrixXcd(a0.cast<cd>()), MatrixXcd(a1.cast<cd>()));
}

SelfAdjointPath linear_path(const RatMatrix& a0, const RatMatrix& a1) {
  require_symmetric(a0, "linear_path");
  require_symmetric(a1, "linear_path");
  if (a0.rows() != a1.rows()) throw ShapeError("linear_path: endpoints differ in size");
  SelfAdjointPath p = linear_path(to_complex(a0), to_complex(a1));
  p.exact = SelfAdjointPath::ExactAffine{a0, a1 - a0, 1, Rational(1)};
  return p;
}

SelfAdjointPath constant_path(const RatMatrix& a) { return linear_path(a, a); }

SelfAdjointPath krein_path(const MatrixXd& b, double s_max) {
  if (b.rows() != b.cols() || b.rows() % 2 != 0) throw ShapeError("krein_path: B must be square of even size");
  if (!(s_max > 0.0)) throw std::invalid_argument("krein_path: s_max must be positive");
  SelfAdjointPath p;
  p.dimension = b.rows();
  p.end = s_max;
  MatrixXcd bc = b.cast<cd>();
  MatrixXcd g = krein_form(b.rows() / 2);
  p.evaluate = [bc, g](double s) -> MatrixXcd { return bc + s * g; };
  p.derivative = [g](double) -> MatrixXcd { return g; };
  return p;
}

SelfAdjointPath krein_path(const RatMatrix& b, const Rational& s_max) {
  require_symmetric(b, "krein_path");
  if (sgn(s_max) <= 0) throw std::invalid_argument("krein_path: s_max must be positive");
  SelfAdjointPath p = krein_path(numeric::to_eigen(b), s_max.get_d());
  const std::size_t dim = b.rows();
  RatMatrix zero(dim, dim);
  RatMatrix j = symplectic_unit<Rational>(dim / 2);
  p.exact = SelfAdjointPath::ExactAffine{embed(b, zero), embed(zero, j), 2, s_max};
  return p;
}

// ------------------------------------------------------------ spectral flow

std::vector<Crossing> find_crossings(const SelfAdjointPath& path, const FlowOptions& opts) {
  if (path.exact && opts.prefer_exact) return exact_crossings(path, opts.tol);
  return float_crossings(path, opts).crossings;
}

SpectralFlowResult spectral_flow(const SelfAdjointPath& path, const FlowOptions& opts) {
  SpectralFlowResult out;
  std::vector<int> net;
  if (path.exact && opts.prefer_exact) {
    out.exact = true;
    out.crossings = exact_crossings(path, opts.tol);
    for (const auto& c : out.crossings) net.push_back(c.signature);
  } else {
    FloatScan scan = float_crossings(path, opts);
    out.crossings = std::move(scan.crossings);
    net = std::move(scan.net_change);
    out.tolerance = opts.tol.for_matrix(path.evaluate(0.0));
  }
  for (std::size_t i = 0; i < out.crossings.size(); ++i) {
    const Crossing& c = out.crossings[i];
    if (c.at_start) out.start_correction = c.operator_inertia.morse_index;
    if (c.at_end) out.end_correction = c.operator_inertia.coindex;
    if (c.at_start || c.at_end) continue;
    if (!c.regular) {
      std::ostringstream os;
      os << "irregular crossing at theta = " << c.location << " (kernel dimension " << c.kernel_dim
         << ", crossing form nullity " << c.operator_inertia.nullity << ")";
      throw IrregularCrossing(os.str(), c.location);
    }
    out.value += net[i];
  }
  out.value += out.end_correction - out.start_correction;
  return out;
}

int relative_morse_index(const MatrixXd& a0, const MatrixXd& a1, const SelfAdjointPath& path,
                         const FlowOptions& opts) {
  MatrixXcd start = path.evaluate(0.0), stop = path.evaluate(path.end);
  if (start.rows() != a0.rows() || stop.rows() != a1.rows())
    throw ShapeError("relative_morse_index: endpoint size mismatch");
  const double t0 = opts.tol.for_matrix(a0), t1 = opts.tol.for_matrix(a1);
  if ((start - a0.cast<cd>()).cwiseAbs().maxCoeff() > t0 || (stop - a1.cast<cd>()).cwiseAbs().maxCoeff() > t1)
    throw std::invalid_argument("relative_morse_index: path endpoints differ from A0, A1");
  return -spectral_flow(path, opts).value;
}

int relative_morse_index(const RatMatrix& a0, const RatMatrix& a1, const SelfAdjointPath& path,
                         const FlowOptions& opts) {
  if (path.exact) {
    const auto& ex = *path.exact;
    if (ex.embed != 1 || !(ex.e0 == a0) || !(ex.e0 + ex.e1 * ex.end == a1))
      throw std::invalid_argument("relative_morse_index: path endpoints differ from A0, A1");
    return -spectral_flow(path, opts).value;
  }
  return relative_morse_index(numeric::to_eigen(a0), numeric::to_eigen(a1), path, opts);
}

std::vector<Crossing> crossing_set(const RatMatrix& b, const Rational& s_max) {
  return exact_crossings(krein_path(b, s_max), {});
}

std::vector<Crossing> crossing_set(const MatrixXd& b, double s_max, const numeric::Tolerance& tol) {
  SelfAdjointPath path = krein_path(b, s_max);
  const Eigen::Index n = b.rows() / 2;
  MatrixXd a = numeric::symplectic_unit(n) * numeric::symmetrized(b, tol.for_matrix(b));
  const double t = tol.for_matrix(a);
  std::vector<Crossing> out;
  // i*s in sigma(JB) with s >= 0 marks a crossing at s.
  for (const Eigenvalue& e : numeric::complex_spectrum(a, tol)) {
    const double slack = std::max(t, 2.0 * e.radius);
    if (std::abs(e.value.real()) > slack || e.value.imag() < -slack) continue;
    const double s = std::max(e.value.imag(), 0.0);
    if (s > s_max + slack) continue;
    Crossing c;
    c.location = std::abs(s) <= slack ? 0.0 : s;
    c.multiplicity = e.multiplicity;
    auto es = hermitian_eigen(path.evaluate(c.location));
    int dim = 0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
      if (std::abs(es.eigenvalues()(i)) <= std::max(t, 4.0 * e.radius)) ++dim;
    c.kernel_dim = std::max(dim, 1);
    c.at_start = c.location == 0.0;
    fill_numeric_kernel(c, path);
    c.operator_inertia = numeric::inertia(c.crossing_operator, tol.relative * 2.0);
    c.signature = c.operator_inertia.signature();
    c.regular = c.operator_inertia.nullity == 0;
    out.push_back(std::move(c));
  }
  std::sort(out.begin(), out.end(), [](const Crossing& x, const Crossing& y) { return x.location < y.location; });
  return out;
}

// ------------------------------------------------------------------- kappa

KappaReport kappa_identity_check(const RatMatrix& b) {
  StabilityClassification cls = classify(b);
  if (cls.verdict != Verdict::linearly_stable)
    throw PreconditionViolated(std::string("kappa_identity_check: JB is ") + to_string(cls.verdict));
  const std::size_t n = b.rows() / 2;
  KappaReport out;
  out.exact = true;
  out.n = static_cast<int>(n);
  out.nullity = inertia(b).nullity;

  // det(sI - GB) = (-1)^n r(-s^2) where p_JB(x) = r(x^2).
  Polynomial r = characteristic_polynomial(symplectic_unit<Rational>(n) * b).even_part_in_square();
  Polynomial q = r.scale_argument(Rational(-1)).compose_square();
  Polynomial sf = square_free_part(q);
  Rational eps(1);
  auto positive = isolate_real_roots(sf, Rational(0), cauchy_root_bound(sf));
  if (!positive.empty()) {
    RootInterval first = positive.front();
    while (!first.exact && sgn(first.lo) == 0) first = refine_root(sf, first, (first.hi - first.lo) / 2);
    eps = first.lo / 2;
  }
  out.exact_epsilon = eps;
  out.epsilon = eps.get_d();
  const Rational bound = cauchy_root_bound(q);
  for (const auto& [f, k] : square_free_decomposition(q)) out.kappa += k * count_real_roots(f, eps, bound);
  out.holds = 2 * out.n == 2 * out.kappa + out.nullity;
  return out;
}

KappaReport kappa_identity_check(const MatrixXd& b, const numeric::Tolerance& tol) {
  StabilityClassification cls = classify(b, std::nullopt, tol);
  if (cls.verdict != Verdict::linearly_stable)
    throw PreconditionViolated(std::string("kappa_identity_check: JB is ") + to_string(cls.verdict));
  const Eigen::Index n = b.rows() / 2;
  KappaReport out;
  out.n = static_cast<int>(n);
  out.nullity = numeric::inertia(b, tol).nullity;
  MatrixXcd gb = krein_form(n) * b.cast<cd>();
  const double t = tol.for_matrix(b);
  Eigen::ComplexEigenSolver<MatrixXcd> solver(gb, false);
  double smallest = 0.0;
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
    const double s = std::abs(solver.eigenvalues()(i).real());
    if (s <= 100.0 * t) continue;
    if (s <= std::sqrt(t)) throw PreconditionViolated("kappa_identity_check: epsilon not separable from 0");
    if (smallest == 0.0 || s < smallest) smallest = s;
  }
  out.epsilon = smallest == 0.0 ? 1.0 : smallest / 2.0;
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i)
    if (solver.eigenvalues()(i).real() >= out.epsilon) ++out.kappa;
  out.holds = 2 * out.n == 2 * out.kappa + out.nullity;
  return out;
}

// ----------------------------------------------------------- krein signature

KreinSignature krein_signature(const MatrixXcd& basis, double tol) {
  if (basis.rows() % 2 != 0) throw ShapeError("krein_signature: ambient dimension must be even");
  KreinSignature out;
  out.dim = static_cast<int>(basis.cols());
  if (out.dim == 0) {
    out.parity_consistent = true;
    return out;
  }
  if (numeric::rank(basis, tol) != basis.cols()) throw std::invalid_argument("krein_signature: basis is dependent");
  MatrixXcd h = basis.adjoint() * krein_form(basis.rows() / 2) * basis;
  IndexReport ir = numeric::inertia(h, tol * (1.0 + h.cwiseAbs().rowwise().sum().maxCoeff()));
  if (ir.nullity != 0) throw std::domain_error("krein_signature: G is degenerate on the subspace");
  out.signature = ir.signature();
  out.parity_consistent = (out.dim - std::abs(out.signature)) % 2 == 0;
  return out;
}

KreinSignature krein_signature(const RatSubspace& subspace) {
  if (subspace.ambient % 2 != 0) throw ShapeError("krein_signature: ambient dimension must be even");
  KreinSignature out;
  out.dim = static_cast<int>(subspace.dim());
  if (out.dim == 0) {
    out.parity_consistent = true;
    return out;
  }
  if (rank(subspace.basis) != subspace.dim()) throw std::invalid_argument("krein_signature: basis is dependent");
  RatMatrix y = restrict_form(symplectic_unit<Rational>(subspace.ambient / 2), subspace);
  RatMatrix zero(y.rows(), y.cols());
  IndexReport ir = scaled(inertia(embed(zero, y)), 2);
  if (ir.nullity != 0) throw std::domain_error("krein_signature: G is degenerate on the subspace");
  out.signature = ir.signature();
  out.parity_consistent = (out.dim - std::abs(out.signature)) % 2 == 0;
  return out;
}

}  // namespace relequil::flow
