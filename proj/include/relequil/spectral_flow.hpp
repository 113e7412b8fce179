#pragma once

// Spectral flow of paths of self-adjoint matrices and the Krein-form path
// D_s = B + sG with G = iJ.

#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "relequil/linalg.hpp"
#include "relequil/numeric.hpp"

namespace relequil::flow {

using numeric::MatrixXcd;
using numeric::MatrixXd;

/// A(theta) on [0, end], evaluated as a complex Hermitian matrix.
///
/// `exact` holds a real symmetric affine form E0 + theta*E1 whose inertia is
/// `embed` times that of A(theta): embed == 1 for real symmetric paths and 2
/// for Hermitian ones through X + iY -> [[X, -Y], [Y, X]].
struct SelfAdjointPath {
  struct ExactAffine {
    RatMatrix e0;
    RatMatrix e1;
    int embed = 1;
    Rational end;
  };

  Eigen::Index dimension = 0;
  double end = 1.0;
  std::function<MatrixXcd(double)> evaluate;
  std::function<MatrixXcd(double)> derivative;
  std::optional<ExactAffine> exact;
};

SelfAdjointPath linear_path(const RatMatrix& a0, const RatMatrix& a1);
SelfAdjointPath linear_path(const MatrixXd& a0, const MatrixXd& a1);
SelfAdjointPath linear_path(const MatrixXcd& a0, const MatrixXcd& a1);
SelfAdjointPath constant_path(const RatMatrix& a);

/// D_s = B + s*G for s in [0, s_max]; the derivative is the constant G.
SelfAdjointPath krein_path(const RatMatrix& b, const Rational& s_max);
SelfAdjointPath krein_path(const MatrixXd& b, double s_max);

/// G = i*J of size 2n.
MatrixXcd krein_form(Eigen::Index n);

struct Crossing {
  double location = 0.0;
  /// Set when the crossing sits at a rational parameter.
  std::optional<Rational> exact_location;
  /// Order of vanishing of det A(theta) (complex dimension count).
  int multiplicity = 0;
  int kernel_dim = 0;
  /// Orthonormal basis of ker A(location), complex columns.
  MatrixXcd kernel;
  /// A'(location) restricted to the kernel.
  MatrixXcd crossing_operator;
  IndexReport operator_inertia;
  /// dim E+ - dim E- of the crossing operator.
  int signature = 0;
  bool regular = false;
  /// Kernel dimension and signature were decided in exact arithmetic.
  bool exact = false;
  bool at_start = false;
  bool at_end = false;
};

class IrregularCrossing : public std::runtime_error {
 public:
  IrregularCrossing(const std::string& what, double location) : std::runtime_error(what), location(location) {}
  double location;
};

class UnresolvedCrossing : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct FlowOptions {
  /// Use the exact affine form when the path has one.
  bool prefer_exact = true;
  numeric::Tolerance tol;
  int grid = 128;
  int bisection_budget = 60;
  /// Worker threads for grid sampling; 0 picks hardware_concurrency.
  unsigned threads = 0;
};

struct SpectralFlowResult {
  int value = 0;
  std::vector<Crossing> crossings;
  /// dim E-(Cr[A(0)]) and dim E+(Cr[A(end)]); zero for nondegenerate endpoints.
  int start_correction = 0;
  int end_correction = 0;
  bool exact = false;
  double tolerance = 0.0;
};

/// All parameters in [0, end] where A is singular, endpoints included.
/// Irregular crossings are reported, not rejected.
std::vector<Crossing> find_crossings(const SelfAdjointPath& path, const FlowOptions& opts = {});

/// Sum of interior crossing signatures minus dim E-(Cr[A(0)]) plus
/// dim E+(Cr[A(end)]). Throws IrregularCrossing for an irregular interior
/// crossing and UnresolvedCrossing when the float search runs out of budget.
SpectralFlowResult spectral_flow(const SelfAdjointPath& path, const FlowOptions& opts = {});

/// -Sf along `path`, after checking that its endpoints are A0 and A1.
int relative_morse_index(const RatMatrix& a0, const RatMatrix& a1, const SelfAdjointPath& path,
                         const FlowOptions& opts = {});
int relative_morse_index(const MatrixXd& a0, const MatrixXd& a1, const SelfAdjointPath& path,
                         const FlowOptions& opts = {});

/// Crossings of D_s on [0, s_max]: the s >= 0 with -s in sigma(GB).
std::vector<Crossing> crossing_set(const RatMatrix& b, const Rational& s_max);
std::vector<Crossing> crossing_set(const MatrixXd& b, double s_max, const numeric::Tolerance& tol = {});

struct KappaReport {
  int n = 0;
  /// Eigenvalues of GB in [epsilon, inf), with multiplicity.
  int kappa = 0;
  int nullity = 0;
  double epsilon = 0.0;
  std::optional<Rational> exact_epsilon;
  bool holds = false;
  bool exact = false;
};

class PreconditionViolated : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Checks n = kappa + nullity(B)/2. Requires J*B linearly stable
/// (PreconditionViolated otherwise).
KappaReport kappa_identity_check(const RatMatrix& b);
KappaReport kappa_identity_check(const MatrixXd& b, const numeric::Tolerance& tol = {});

struct KreinSignature {
  int signature = 0;
  int dim = 0;
  /// dim - |signature| is even.
  bool parity_consistent = false;
};

/// Signature of G restricted to span(basis) in C^{2n}. Throws
/// std::domain_error when the restriction is degenerate.
KreinSignature krein_signature(const MatrixXcd& basis, double tol = 1e-10);
/// Same for a real subspace, exactly.
KreinSignature krein_signature(const RatSubspace& subspace);

}  // namespace relequil::flow
