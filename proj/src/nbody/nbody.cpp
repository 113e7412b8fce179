#include "relequil/nbody.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "relequil/kernels.hpp"
#include "relequil/linalg.hpp"

namespace relequil::nbody {

namespace {

struct Soa {
  std::vector<double> x, y;
};

Soa split(const NBodySystem& sys) {
  Soa s;
  for (int i = 0; i < sys.n(); ++i) {
    s.x.push_back(sys.positions(2 * i));
    s.y.push_back(sys.positions(2 * i + 1));
  }
  return s;
}

NBodySystem with_positions(const NBodySystem& sys, const VectorXd& q) {
  NBodySystem out = sys;
  out.positions = q;
  return out;
}

VectorXd translation(int n, int axis) {
  VectorXd t = VectorXd::Zero(2 * n);
  for (int i = 0; i < n; ++i) t(2 * i + axis) = 1.0;
  return t;
}

void recenter(const std::vector<double>& m, VectorXd& q) {
  double total = 0.0, cx = 0.0, cy = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    total += m[i];
    cx += m[i] * q(2 * static_cast<Eigen::Index>(i));
    cy += m[i] * q(2 * static_cast<Eigen::Index>(i) + 1);
  }
  for (std::size_t i = 0; i < m.size(); ++i) {
    q(2 * static_cast<Eigen::Index>(i)) -= cx / total;
    q(2 * static_cast<Eigen::Index>(i) + 1) -= cy / total;
  }
}

// Rotates q so that body `pin` lies on the positive horizontal axis.
void pin_gauge(VectorXd& q, int pin) {
  const double angle = std::atan2(q(2 * pin + 1), q(2 * pin));
  const double c = std::cos(angle), s = std::sin(angle);
  for (Eigen::Index i = 0; i < q.size() / 2; ++i) {
    const double x = q(2 * i), y = q(2 * i + 1);
    q(2 * i) = c * x + s * y;
    q(2 * i + 1) = -s * x + c * y;
  }
  q(2 * pin + 1) = 0.0;
}

// M-orthonormal basis of the M-orthogonal complement of translations, q and q-perp.
MatrixXd tangent_basis(const NBodySystem& sys) {
  const int n = sys.n();
  const VectorXd& q = sys.positions;
  VectorXd sqrt_m(2 * n);
  for (int i = 0; i < n; ++i) sqrt_m(2 * i) = sqrt_m(2 * i + 1) = std::sqrt(sys.masses[static_cast<std::size_t>(i)]);
  MatrixXd c(2 * n, 4);
  c.col(0) = translation(n, 0);
  c.col(1) = translation(n, 1);
  c.col(2) = q;
  c.col(3) = rotation_direction(q);
  c = sqrt_m.asDiagonal() * c;
  Eigen::ColPivHouseholderQR<MatrixXd> qr(c);
  qr.setThreshold(1e-10);
  if (qr.rank() != 4) throw std::domain_error("cannot build the tangent basis: configuration is degenerate");
  MatrixXd full = qr.householderQ() * MatrixXd::Identity(2 * n, 2 * n);
  MatrixXd y = full.rightCols(2 * n - 4);
  return sqrt_m.cwiseInverse().asDiagonal() * y;
}

double residual_norm(const NBodySystem& sys) { return cc_residual_vector(sys).norm(); }

}  // namespace

MatrixXd NBodySystem::mass_matrix() const {
  VectorXd d(2 * n());
  for (int i = 0; i < n(); ++i) d(2 * i) = d(2 * i + 1) = masses[static_cast<std::size_t>(i)];
  return d.asDiagonal();
}

void NBodySystem::validate() const {
  if (masses.size() < 2) throw std::invalid_argument("need at least two bodies");
  for (double m : masses)
    if (!(m > 0.0) || !std::isfinite(m)) throw std::invalid_argument("masses must be positive");
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw std::invalid_argument("alpha must be positive");
  if (positions.size() != 2 * n()) {
    std::ostringstream os;
    os << "expected " << 2 * n() << " coordinates, got " << positions.size();
    throw std::invalid_argument(os.str());
  }
  if (!positions.allFinite()) throw std::invalid_argument("positions must be finite");
}

std::pair<double, double> distance_range(const NBodySystem& sys) {
  double lo = INFINITY, hi = 0.0;
  for (int i = 0; i < sys.n(); ++i)
    for (int j = i + 1; j < sys.n(); ++j) {
      const double d = (sys.positions.segment<2>(2 * i) - sys.positions.segment<2>(2 * j)).norm();
      lo = std::min(lo, d);
      hi = std::max(hi, d);
    }
  return {lo, hi};
}

void check_collision(const NBodySystem& sys, double guard) {
  auto [lo, hi] = distance_range(sys);
  if (!(lo > guard * hi)) {
    std::ostringstream os;
    os << "collision: minimum pairwise distance " << lo << " below guard " << guard << " x diameter " << hi;
    throw CollisionError(os.str());
  }
}

double potential_U(const NBodySystem& sys, double guard) {
  sys.validate();
  check_collision(sys, guard);
  Soa s = split(sys);
  std::vector<double> gx(s.x.size()), gy(s.x.size());
  double u = 0.0;
  kernels::active().potential_gradient({s.x.data(), s.y.data(), sys.masses.data(), s.x.size()}, sys.alpha, &u,
                                       gx.data(), gy.data());
  return u;
}

VectorXd grad_U(const NBodySystem& sys, double guard) {
  sys.validate();
  check_collision(sys, guard);
  Soa s = split(sys);
  std::vector<double> gx(s.x.size()), gy(s.x.size());
  double u = 0.0;
  kernels::active().potential_gradient({s.x.data(), s.y.data(), sys.masses.data(), s.x.size()}, sys.alpha, &u,
                                       gx.data(), gy.data());
  VectorXd g(2 * sys.n());
  for (int i = 0; i < sys.n(); ++i) {
    g(2 * i) = gx[static_cast<std::size_t>(i)];
    g(2 * i + 1) = gy[static_cast<std::size_t>(i)];
  }
  return g;
}

MatrixXd hess_U(const NBodySystem& sys, double guard) {
  sys.validate();
  check_collision(sys, guard);
  const int n = sys.n();
  const double a = sys.alpha;
  std::vector<double> r2;
  std::vector<Eigen::Vector2d> diff;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      Eigen::Vector2d d = sys.positions.segment<2>(2 * i) - sys.positions.segment<2>(2 * j);
      diff.push_back(d);
      r2.push_back(d.squaredNorm());
    }
  std::vector<double> p(r2.size());
  kernels::active().inverse_powers(r2.data(), r2.size(), a, p.data());
  MatrixXd h = MatrixXd::Zero(2 * n, 2 * n);
  std::size_t k = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j, ++k) {
      const double mm = sys.masses[static_cast<std::size_t>(i)] * sys.masses[static_cast<std::size_t>(j)];
      const double c = a * mm * p[k] / r2[k];
      const Eigen::Matrix2d block =
          c * ((a + 2.0) * diff[k] * diff[k].transpose() / r2[k] - Eigen::Matrix2d::Identity());
      h.block<2, 2>(2 * i, 2 * i) += block;
      h.block<2, 2>(2 * j, 2 * j) += block;
      h.block<2, 2>(2 * i, 2 * j) -= block;
      h.block<2, 2>(2 * j, 2 * i) -= block;
    }
  return h;
}

double locked_inertia(const NBodySystem& sys) {
  double s = 0.0;
  for (int i = 0; i < sys.n(); ++i)
    s += sys.masses[static_cast<std::size_t>(i)] * sys.positions.segment<2>(2 * i).squaredNorm();
  return s;
}

VectorXd inertia_gradient(const NBodySystem& sys) { return 2.0 * (sys.mass_matrix() * sys.positions); }

VectorXd rotation_direction(const VectorXd& q) {
  VectorXd r(q.size());
  for (Eigen::Index i = 0; i < q.size() / 2; ++i) {
    r(2 * i) = -q(2 * i + 1);
    r(2 * i + 1) = q(2 * i);
  }
  return r;
}

VectorXd cc_residual_vector(const NBodySystem& sys) {
  const double u = potential_U(sys, 0.0);
  return grad_U(sys, 0.0) + (sys.alpha * u / locked_inertia(sys)) * (sys.mass_matrix() * sys.positions);
}

CentralConfiguration find_central_configuration(const NBodySystem& seed, const Settings& settings) {
  seed.validate();
  check_collision(seed, settings.collision_guard);
  NBodySystem sys = seed;
  VectorXd q = seed.positions;
  recenter(sys.masses, q);
  const double scale = q.cwiseAbs().maxCoeff();
  int pin = 0;
  while (pin < sys.n() && q.segment<2>(2 * pin).norm() <= 1e-12 * scale) ++pin;
  auto normalize = [&](VectorXd& v) {
    recenter(sys.masses, v);
    v /= std::sqrt(locked_inertia(with_positions(sys, v)));
    pin_gauge(v, pin);
  };
  normalize(q);
  sys.positions = q;

  auto safe_residual = [&](const VectorXd& v) -> std::optional<double> {
    NBodySystem trial = with_positions(sys, v);
    auto [lo, hi] = distance_range(trial);
    if (!(lo > settings.collision_guard * hi)) return std::nullopt;
    return residual_norm(trial);
  };

  CentralConfiguration cc;
  double r = residual_norm(sys);
  int it = 0;
  for (; it < settings.max_iter && r > settings.cc_tol; ++it) {
    if (2 * sys.n() - 4 == 0) break;
    MatrixXd t = tangent_basis(sys);
    const double u = potential_U(sys, settings.collision_guard);
    MatrixXd hr = t.transpose() * (hess_U(sys, settings.collision_guard) + sys.alpha * u * sys.mass_matrix()) * t;
    VectorXd g = t.transpose() * cc_residual_vector(sys);

    std::vector<VectorXd> directions;
    Eigen::FullPivLU<MatrixXd> lu(hr);
    if (lu.isInvertible()) directions.push_back(-lu.solve(g));
    directions.push_back(-(hr * g));  // steepest descent on |T^T F|^2 / 2

    bool moved = false;
    for (const VectorXd& c : directions) {
      if (!c.allFinite()) continue;
      for (double step = 1.0; step > 1e-10; step *= 0.5) {
        VectorXd trial = q + step * (t * c);
        normalize(trial);
        auto rt = safe_residual(trial);
        if (rt && *rt <= (1.0 - 1e-4 * step) * r) {
          q = trial;
          sys.positions = q;
          r = *rt;
          moved = true;
          break;
        }
      }
      if (moved) break;
    }
    if (!moved) break;
  }
  if (r > settings.cc_tol) {
    std::ostringstream os;
    os << "central configuration search stalled after " << it << " iterations with residual " << r;
    throw ConvergenceError(os.str());
  }
  check_collision(sys, settings.collision_guard);
  cc.system = sys;
  cc.xi_squared = sys.alpha * potential_U(sys, settings.collision_guard);
  cc.residual = r;
  cc.iterations = it;
  return cc;
}

CentralConfiguration make_central_configuration(const NBodySystem& sys, double cc_tol) {
  sys.validate();
  const double inertia = locked_inertia(sys);
  if (std::abs(inertia - 1.0) > cc_tol) throw std::invalid_argument("configuration is not on the unit inertia sphere");
  CentralConfiguration cc;
  cc.system = sys;
  cc.residual = residual_norm(sys);
  if (cc.residual > cc_tol) throw std::invalid_argument("configuration is not central within tolerance");
  cc.xi_squared = sys.alpha * potential_U(sys);
  return cc;
}

AmendedHessianReport amended_hessian(const CentralConfiguration& cc, const numeric::Tolerance& tol) {
  const NBodySystem& sys = cc.system;
  const int n = sys.n();
  const VectorXd& q = sys.positions;
  const MatrixXd m = sys.mass_matrix();
  const double xi2 = cc.xi_squared;
  const double inertia = locked_inertia(sys);
  const MatrixXd d2u = hess_U(sys);
  const double u = potential_U(sys);
  const VectorXd mq = m * q;

  AmendedHessianReport rep;
  const MatrixXd form = -d2u - xi2 * m + (4.0 * xi2 / inertia) * mq * mq.transpose();
  MatrixXd t = 2 * n - 4 > 0 ? tangent_basis(sys) : MatrixXd(2 * n, 0);
  rep.basis_V.resize(2 * n, t.cols() + 1);
  rep.basis_V.col(0) = q / std::sqrt(inertia);
  rep.basis_V.rightCols(t.cols()) = t;

  auto sym = [](const MatrixXd& a) -> MatrixXd { return (a + a.transpose()) / 2.0; };
  rep.matrix_on_V = sym(rep.basis_V.transpose() * form * rep.basis_V);
  rep.tangent_block = rep.matrix_on_V.bottomRightCorner(t.cols(), t.cols());
  rep.hessU_on_Shat = sym(t.transpose() * (d2u + sys.alpha * u * m) * t);
  rep.radial_eigenvalue = rep.matrix_on_V(0, 0);
  rep.tolerance = tol.for_matrix(rep.matrix_on_V);
  rep.inertia_V = numeric::inertia(rep.matrix_on_V, tol);
  rep.inertia_Shat = numeric::inertia(rep.hessU_on_Shat, tol);

  const MatrixXd op = -(m.inverse() * d2u) - xi2 * MatrixXd::Identity(2 * n, 2 * n) + 4.0 * xi2 * q * mq.transpose();
  rep.operator_norm = numeric::norm_inf(op);
  rep.radial_residual = (op * q - (2.0 - sys.alpha) * xi2 * q).norm();
  rep.sign_identity_residual =
      t.cols() == 0 ? 0.0 : (rep.tangent_block + rep.hessU_on_Shat).cwiseAbs().maxCoeff();
  return rep;
}

E1Linearization e1_linearization(double xi, double alpha) {
  if (xi == 0.0) throw std::invalid_argument("e1_linearization: xi must be nonzero");
  E1Linearization out;
  out.matrix.resize(4, 4);
  out.matrix << 0, -xi, 1, 0,            //
      xi, 0, 0, 1,                        //
      (alpha + 1) * xi * xi, 0, 0, -xi,  //
      0, -xi * xi, xi, 0;
  const double d = alpha - 2.0;
  const std::complex<double> root = d >= 0 ? std::complex<double>(std::sqrt(d) * std::abs(xi), 0.0)
                                           : std::complex<double>(0.0, std::sqrt(-d) * std::abs(xi));
  out.eigenvalues = {0.0, 0.0, -root, root};

  const Rational x = from_double(xi), a = from_double(alpha);
  RatMatrix e{{Rational(0), Rational(-x), Rational(1), Rational(0)},
              {x, Rational(0), Rational(0), Rational(1)},
              {Rational((a + 1) * x * x), Rational(0), Rational(0), Rational(-x)},
              {Rational(0), Rational(-x * x), x, Rational(0)}};
  RatMatrix power = e;
  for (int k = 1; k <= 4; ++k) {
    out.power_ranks.push_back(static_cast<int>(rank(power)));
    power = power * e;
  }
  out.single_jordan_block = out.power_ranks == std::vector<int>{3, 2, 1, 0};
  return out;
}

StabilityVerdict stability_verdict(const IndexReport& inertia_Shat, const IndexReport& inertia_V, double alpha) {
  StabilityVerdict v;
  v.inertia_Shat = inertia_Shat;
  v.inertia_V = inertia_V;
  v.e2 = theorem_predict(inertia_Shat);
  v.reduced_applicable = alpha > 0.0 && alpha < 2.0;
  std::vector<std::string> fired;
  if (v.reduced_applicable) {
    v.reduced = theorem_predict(inertia_V);
    if (v.reduced.predicts_instability) fired.push_back(std::string("reduced_space:") + to_string(v.reduced.reason));
  }
  if (v.e2.predicts_instability) fired.push_back(std::string("e2:") + to_string(v.e2.reason));
  v.linearly_unstable = !fired.empty();
  if (fired.empty()) {
    v.criterion = "none";
  } else {
    for (std::size_t i = 0; i < fired.size(); ++i) v.criterion += (i ? "," : "") + fired[i];
  }
  return v;
}

StabilityVerdict stability_verdict(const CentralConfiguration& cc, const numeric::Tolerance& tol) {
  AmendedHessianReport rep = amended_hessian(cc, tol);
  return stability_verdict(rep.inertia_Shat, rep.inertia_V, cc.system.alpha);
}

}  // namespace relequil::nbody
