#pragma once

// binary64 backend. Every decision that compares against zero goes through a
// Tolerance, and every report carries the absolute tolerance it used.

#include <Eigen/Dense>

#include <optional>

#include "relequil/matrix.hpp"
#include "relequil/spectrum.hpp"

namespace relequil::numeric {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Default absolute tolerance is relative * (1 + ||A||_inf); `absolute`
/// overrides it outright.
struct Tolerance {
  double relative = 1e-8;
  std::optional<double> absolute;

  double for_matrix(const MatrixXd& a) const;
  double for_matrix(const MatrixXcd& a) const;
};

struct RealSubspace {
  Eigen::Index ambient = 0;
  MatrixXd basis;  // ambient x dim, orthonormal columns when produced here

  Eigen::Index dim() const { return basis.cols(); }
};

double norm_inf(const MatrixXd& a);

/// Returns (A + A^T) / 2 after checking |A - A^T| <= tol entrywise.
/// Throws ShapeError / std::invalid_argument.
MatrixXd symmetrized(const MatrixXd& a, double tol);

/// Eigenvalue counts below -tol, within +-tol, above +tol.
IndexReport inertia(const MatrixXd& b, const Tolerance& tol = {});
/// Same for a complex Hermitian matrix.
IndexReport inertia(const MatrixXcd& h, double tol);

/// Null space from the SVD (singular values <= tol).
RealSubspace kernel(const MatrixXd& a, const Tolerance& tol = {});

/// Numerical rank with an absolute singular-value threshold.
Eigen::Index rank(const MatrixXcd& a, double tol);

/// Unclustered eigenvalues. Falls back to complex QR when the real Schur
/// iteration stalls (it does on some +-a+-bi quadruples).
Eigen::VectorXcd eigenvalues(const MatrixXd& a);

/// Eigenvalues clustered at radius s (tol/s)^(1/k) for groups of k, since a
/// defective eigenvalue of block size k splits at that scale in binary64;
/// cluster means are reported.
Spectrum complex_spectrum(const MatrixXd& a, const Tolerance& tol = {});

/// For each clustered eigenvalue compares rank(A - lI) with rank((A - lI)^2).
/// Indeterminate when a singular value falls inside [tol/100, 100 tol].
SemisimpleReport is_semisimple(const MatrixXd& a, const Tolerance& tol = {});

/// Q with Q J Q^T = omega up to residual <= tol * ||omega||, by skew
/// Gram–Schmidt with largest-pairing partner selection.
MatrixXd symplectic_reduction(const MatrixXd& omega, const Tolerance& tol = {});

MatrixXd restrict_form(const MatrixXd& b, const RealSubspace& w);

MatrixXd symplectic_unit(Eigen::Index n);

MatrixXd to_eigen(const RatMatrix& a);

}  // namespace relequil::numeric
