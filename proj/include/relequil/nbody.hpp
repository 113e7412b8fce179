#pragma once

// Planar n-body-type problems with potential U = sum m_i m_j / |q_i - q_j|^alpha.
// Positions are interleaved (x1, y1, x2, y2, ...); M = diag(m1, m1, m2, m2, ...).

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "relequil/numeric.hpp"
#include "relequil/stability.hpp"

namespace relequil::nbody {

using numeric::MatrixXd;
using numeric::VectorXd;

struct Settings {
  double cc_tol = 1e-10;
  int max_iter = 200;
  /// Relative to the configuration diameter.
  double collision_guard = 1e-6;
};

struct NBodySystem {
  std::vector<double> masses;
  double alpha = 1.0;
  VectorXd positions;

  int n() const { return static_cast<int>(masses.size()); }
  MatrixXd mass_matrix() const;
  /// Throws std::invalid_argument for fewer than two bodies, nonpositive
  /// masses or alpha, or a position vector of the wrong length.
  void validate() const;
};

class CollisionError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Smallest pairwise distance and largest pairwise distance.
std::pair<double, double> distance_range(const NBodySystem& sys);

/// Throws CollisionError when two bodies are closer than guard * diameter.
void check_collision(const NBodySystem& sys, double guard);

double potential_U(const NBodySystem& sys, double guard = 1e-6);
VectorXd grad_U(const NBodySystem& sys, double guard = 1e-6);
MatrixXd hess_U(const NBodySystem& sys, double guard = 1e-6);

double locked_inertia(const NBodySystem& sys);
VectorXd inertia_gradient(const NBodySystem& sys);

/// DU + (alpha U / I) M q; vanishes exactly at central configurations.
VectorXd cc_residual_vector(const NBodySystem& sys);

/// Rotational direction (-y1, x1, -y2, x2, ...).
VectorXd rotation_direction(const VectorXd& q);

struct CentralConfiguration {
  NBodySystem system;   // I(q) = 1, centre of mass at the origin
  double xi_squared = 0.0;
  double residual = 0.0;
  int iterations = 0;
};

/// Projected Newton on {I = 1} with the centre of mass fixed and the first
/// body off the origin pinned to the positive horizontal axis.
/// Throws CollisionError or ConvergenceError.
CentralConfiguration find_central_configuration(const NBodySystem& seed, const Settings& settings = {});

/// Wraps an already converged configuration after checking I = 1 and the residual.
CentralConfiguration make_central_configuration(const NBodySystem& sys, double cc_tol = 1e-8);

struct AmendedHessianReport {
  /// Bilinear form of the amended Hessian on an M-orthonormal basis of the
  /// (2n-3)-dimensional space V; the first basis vector is q.
  MatrixXd matrix_on_V;
  IndexReport inertia_V;
  /// Constrained Hessian D^2U + alpha U M on T_q S-hat (dimension 2n-4).
  MatrixXd hessU_on_Shat;
  IndexReport inertia_Shat;
  /// Amended Hessian on T_q S-hat (the trailing block of matrix_on_V).
  MatrixXd tangent_block;
  /// Columns: q, then the T_q S-hat basis.
  MatrixXd basis_V;
  double radial_eigenvalue = 0.0;
  /// ||L q - (2 - alpha) xi^2 q|| for L = -M^{-1}D^2U - xi^2 I + 4 xi^2 q (Mq)^T.
  double radial_residual = 0.0;
  /// ||L||_inf, the scale for radial_residual.
  double operator_norm = 0.0;
  /// max |tangent_block + hessU_on_Shat|.
  double sign_identity_residual = 0.0;
  double tolerance = 0.0;
};

/// Throws std::domain_error when the basis of V cannot be built.
AmendedHessianReport amended_hessian(const CentralConfiguration& cc, const numeric::Tolerance& tol = {});

struct E1Linearization {
  MatrixXd matrix;
  /// Closed form {0, 0, -sqrt(alpha-2) xi, sqrt(alpha-2) xi}.
  std::vector<std::complex<double>> eigenvalues;
  /// Ranks of A, A^2, A^3, A^4 computed exactly from the rationals nearest
  /// to alpha and xi (the binary64 values themselves).
  std::vector<int> power_ranks;
  /// power_ranks == (3, 2, 1, 0): similar to a single nilpotent 4x4 Jordan block.
  bool single_jordan_block = false;
};

/// Throws std::invalid_argument when xi == 0.
E1Linearization e1_linearization(double xi, double alpha);

struct StabilityVerdict {
  IndexReport inertia_Shat;
  IndexReport inertia_V;
  /// Reduced-space verdict, only for 0 < alpha < 2.
  bool reduced_applicable = false;
  TheoremVerdict reduced;
  /// Index-parity verdict on E2 (any alpha > 0).
  TheoremVerdict e2;
  bool linearly_unstable = false;
  std::string criterion;
};

StabilityVerdict stability_verdict(const IndexReport& inertia_Shat, const IndexReport& inertia_V, double alpha);
StabilityVerdict stability_verdict(const CentralConfiguration& cc, const numeric::Tolerance& tol = {});

}  // namespace relequil::nbody
