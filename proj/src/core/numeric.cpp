#include "relequil/numeric.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace relequil::numeric {

namespace {

void require_square(Eigen::Index rows, Eigen::Index cols, const char* what) {
  if (rows != cols) {
    std::ostringstream os;
    os << what << ": expected a square matrix, got " << rows << "x" << cols;
    throw ShapeError(os.str());
  }
}

double norm_inf_c(const MatrixXcd& a) {
  if (a.size() == 0) return 0.0;
  return a.cwiseAbs().rowwise().sum().maxCoeff();
}

}  // namespace

double norm_inf(const MatrixXd& a) {
  if (a.size() == 0) return 0.0;
  return a.cwiseAbs().rowwise().sum().maxCoeff();
}

double Tolerance::for_matrix(const MatrixXd& a) const {
  return absolute ? *absolute : relative * (1.0 + norm_inf(a));
}

double Tolerance::for_matrix(const MatrixXcd& a) const {
  return absolute ? *absolute : relative * (1.0 + norm_inf_c(a));
}

MatrixXd symmetrized(const MatrixXd& a, double tol) {
  require_square(a.rows(), a.cols(), "symmetrized");
  double asym = a.size() == 0 ? 0.0 : (a - a.transpose()).cwiseAbs().maxCoeff();
  if (asym > tol) {
    std::ostringstream os;
    os << "matrix is not symmetric: max |a_ij - a_ji| = " << asym << " exceeds tolerance " << tol;
    throw std::invalid_argument(os.str());
  }
  return (a + a.transpose()) / 2.0;
}

IndexReport inertia(const MatrixXd& b, const Tolerance& tol) {
  const double t = tol.for_matrix(b);
  MatrixXd s = symmetrized(b, t);
  IndexReport r;
  r.subspace_dim = static_cast<int>(s.rows());
  if (s.rows() == 0) return r;
  Eigen::SelfAdjointEigenSolver<MatrixXd> solver(s, Eigen::EigenvaluesOnly);
  for (Eigen::Index i = 0; i < s.rows(); ++i) {
    double v = solver.eigenvalues()(i);
    if (v < -t) ++r.morse_index;
    else if (v > t) ++r.coindex;
    else ++r.nullity;
  }
  return r;
}

IndexReport inertia(const MatrixXcd& h, double tol) {
  require_square(h.rows(), h.cols(), "inertia");
  IndexReport r;
  r.subspace_dim = static_cast<int>(h.rows());
  if (h.rows() == 0) return r;
  MatrixXcd s = (h + h.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<MatrixXcd> solver(s, Eigen::EigenvaluesOnly);
  for (Eigen::Index i = 0; i < s.rows(); ++i) {
    double v = solver.eigenvalues()(i);
    if (v < -tol) ++r.morse_index;
    else if (v > tol) ++r.coindex;
    else ++r.nullity;
  }
  return r;
}

RealSubspace kernel(const MatrixXd& a, const Tolerance& tol) {
  require_square(a.rows(), a.cols(), "kernel");
  const double t = tol.for_matrix(a);
  RealSubspace out{a.cols(), MatrixXd(a.cols(), 0)};
  if (a.size() == 0) return out;
  Eigen::JacobiSVD<MatrixXd> svd(a, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  Eigen::Index r = 0;
  while (r < sv.size() && sv(r) > t) ++r;
  out.basis = svd.matrixV().rightCols(a.cols() - r);
  return out;
}

Eigen::Index rank(const MatrixXcd& a, double tol) {
  if (a.size() == 0) return 0;
  Eigen::JacobiSVD<MatrixXcd> svd(a);
  Eigen::Index r = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > tol) ++r;
  return r;
}

Eigen::VectorXcd eigenvalues(const MatrixXd& a) {
  Eigen::EigenSolver<MatrixXd> real(a, false);
  if (real.info() == Eigen::Success) return real.eigenvalues();
  Eigen::ComplexEigenSolver<MatrixXcd> complex(a.cast<std::complex<double>>(), false);
  if (complex.info() != Eigen::Success) throw std::runtime_error("eigenvalue iteration did not converge");
  return complex.eigenvalues();
}

namespace {

struct Cluster {
  std::complex<double> mean;
  int size;
  double radius;
};

// A Jordan block of size k perturbed by eps splits into k points on a circle
// of radius ~eps^(1/k), so the linking radius grows with the group size.
// Levels run from k = n down to 2; a single-link component of at least k
// points at radius s (t/s)^(1/k) becomes one cluster.
std::vector<Cluster> cluster_eigenvalues(const Eigen::VectorXcd& values, double t, double scale) {
  const Eigen::Index n = values.size();
  std::vector<bool> taken(static_cast<std::size_t>(n), false);
  std::vector<Cluster> out;
  auto emit = [&](const std::vector<Eigen::Index>& members) {
    Cluster c{0.0, static_cast<int>(members.size()), 0.0};
    for (auto i : members) c.mean += values(i);
    c.mean /= static_cast<double>(c.size);
    for (auto i : members) c.radius = std::max(c.radius, std::abs(values(i) - c.mean));
    out.push_back(c);
  };
  const double rel = std::min(1.0, t / scale);
  for (Eigen::Index k = n; k >= 2; --k) {
    const double radius = std::max(t, scale * std::pow(rel, 1.0 / static_cast<double>(k)));
    std::vector<bool> seen(taken);
    for (Eigen::Index i = 0; i < n; ++i) {
      if (seen[static_cast<std::size_t>(i)]) continue;
      std::vector<Eigen::Index> members{i};
      seen[static_cast<std::size_t>(i)] = true;
      for (std::size_t head = 0; head < members.size(); ++head)
        for (Eigen::Index j = 0; j < n; ++j)
          if (!seen[static_cast<std::size_t>(j)] && std::abs(values(members[head]) - values(j)) <= radius) {
            seen[static_cast<std::size_t>(j)] = true;
            members.push_back(j);
          }
      if (static_cast<Eigen::Index>(members.size()) < k) continue;
      for (auto m : members) taken[static_cast<std::size_t>(m)] = true;
      emit(members);
    }
  }
  for (Eigen::Index i = 0; i < n; ++i)
    if (!taken[static_cast<std::size_t>(i)]) emit({i});
  return out;
}

std::vector<Cluster> clustered_spectrum(const MatrixXd& a, double t) {
  const double scale = std::max(1.0, a.cwiseAbs().rowwise().sum().maxCoeff());
  return cluster_eigenvalues(eigenvalues(a), t, scale);
}

}  // namespace

Spectrum complex_spectrum(const MatrixXd& a, const Tolerance& tol) {
  require_square(a.rows(), a.cols(), "complex_spectrum");
  if (a.size() == 0) return {};
  const double t = tol.for_matrix(a);
  Spectrum out;
  for (const auto& c : clustered_spectrum(a, t)) {
    Eigenvalue e;
    e.multiplicity = c.size;
    e.radius = c.radius;
    e.real = std::abs(c.mean.imag()) <= t;
    e.value = e.real ? std::complex<double>(c.mean.real(), 0.0) : c.mean;
    out.push_back(e);
  }
  std::sort(out.begin(), out.end(), [](const Eigenvalue& x, const Eigenvalue& y) {
    if (x.value.real() != y.value.real()) return x.value.real() < y.value.real();
    return x.value.imag() < y.value.imag();
  });
  return out;
}

SemisimpleReport is_semisimple(const MatrixXd& a, const Tolerance& tol) {
  require_square(a.rows(), a.cols(), "is_semisimple");
  SemisimpleReport report;
  const double t = tol.for_matrix(a);
  report.tolerance = t;
  report.semisimple = Tri::yes;
  if (a.size() == 0) return report;
  std::ostringstream cert;
  bool ambiguous = false;
  for (const auto& c : clustered_spectrum(a, t)) {
    MatrixXcd m = a.cast<std::complex<double>>();
    m.diagonal().array() -= c.mean;
    MatrixXcd m2 = m * m;
    Eigen::JacobiSVD<MatrixXcd> svd1(m), svd2(m2);
    const double t2 = t * std::max(1.0, svd1.singularValues()(0));
    auto count = [&](const Eigen::VectorXd& sv, double thr) {
      Eigen::Index r = 0;
      for (Eigen::Index i = 0; i < sv.size(); ++i) {
        if (sv(i) > thr) ++r;
        if (sv(i) >= thr / 100.0 && sv(i) <= thr * 100.0) ambiguous = true;
      }
      return r;
    };
    Eigen::Index r1 = count(svd1.singularValues(), t);
    Eigen::Index r2 = count(svd2.singularValues(), t2);
    cert << "lambda=" << c.mean << " rank1=" << r1 << " rank2=" << r2 << " mult=" << c.size << "; ";
    if (r2 < r1 && report.semisimple != Tri::no) {
      report.semisimple = Tri::no;
      report.defective_eigenvalue = c.mean;
    }
  }
  if (report.semisimple == Tri::yes && ambiguous) report.semisimple = Tri::indeterminate;
  report.certificate = cert.str();
  return report;
}

MatrixXd symplectic_unit(Eigen::Index n) {
  MatrixXd j = MatrixXd::Zero(2 * n, 2 * n);
  j.topRightCorner(n, n) = -MatrixXd::Identity(n, n);
  j.bottomLeftCorner(n, n) = MatrixXd::Identity(n, n);
  return j;
}

MatrixXd symplectic_reduction(const MatrixXd& omega, const Tolerance& tol) {
  require_square(omega.rows(), omega.cols(), "symplectic_reduction");
  const Eigen::Index dim = omega.rows();
  if (dim % 2 != 0) throw ShapeError("symplectic_reduction: odd dimension " + std::to_string(dim));
  const double t = tol.for_matrix(omega);
  if (dim > 0 && (omega + omega.transpose()).cwiseAbs().maxCoeff() > t)
    throw std::invalid_argument("symplectic_reduction: matrix is not skew-symmetric");
  const Eigen::Index n = dim / 2;
  std::vector<VectorXd> pool;
  for (Eigen::Index i = 0; i < dim; ++i) pool.push_back(VectorXd::Unit(dim, i));
  MatrixXd p(dim, dim);
  for (Eigen::Index k = 0; k < n; ++k) {
    // Take the pair with the largest pairing for stability.
    std::size_t bi = 0, bj = 1;
    double best = -1.0;
    for (std::size_t i = 0; i < pool.size(); ++i)
      for (std::size_t j = i + 1; j < pool.size(); ++j) {
        double w = std::abs(pool[i].dot(omega * pool[j]));
        if (w > best) {
          best = w;
          bi = i;
          bj = j;
        }
      }
    if (best <= t) throw std::domain_error("symplectic_reduction: matrix is singular");
    VectorXd x = pool[bi];
    VectorXd y = pool[bj] * (-1.0 / x.dot(omega * pool[bj]));
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(bj));
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(bi));
    for (auto& v : pool) {
      double a = y.dot(omega * v);
      double b = x.dot(omega * v);
      v += -a * x + b * y;
    }
    p.col(k) = x;
    p.col(n + k) = y;
  }
  MatrixXd q = p.inverse().transpose();
  double residual = (q * symplectic_unit(n) * q.transpose() - omega).cwiseAbs().maxCoeff();
  if (residual > t * std::max(1.0, norm_inf(omega))) {
    std::ostringstream os;
    os << "symplectic_reduction: residual " << residual << " exceeds tolerance";
    throw std::domain_error(os.str());
  }
  return q;
}

MatrixXd restrict_form(const MatrixXd& b, const RealSubspace& w) {
  require_square(b.rows(), b.cols(), "restrict_form");
  if (w.ambient != b.rows() || (w.dim() > 0 && w.basis.rows() != b.rows()))
    throw ShapeError("restrict_form: subspace ambient dimension does not match the form");
  return w.basis.transpose() * b * w.basis;
}

MatrixXd to_eigen(const RatMatrix& a) {
  MatrixXd out(static_cast<Eigen::Index>(a.rows()), static_cast<Eigen::Index>(a.cols()));
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = a(i, j).get_d();
  return out;
}

}  // namespace relequil::numeric
