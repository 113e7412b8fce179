#pragma once

// Stability of linearized Hamiltonian systems Omega*B from the spectrum and
// the sign structure of the symmetric matrix B.

#include <complex>
#include <optional>
#include <stdexcept>
#include <string>

#include "relequil/linalg.hpp"
#include "relequil/numeric.hpp"

namespace relequil {

enum class Verdict { spectrally_unstable, spectrally_stable_not_linear, linearly_stable, indeterminate };

const char* to_string(Verdict v);

/// Invariants: verdict == linearly_stable iff on-axis and semisimple;
/// verdict == spectrally_unstable iff the spectrum leaves the imaginary axis.
struct StabilityClassification {
  Tri spectrum_on_axis = Tri::indeterminate;
  Tri semisimple = Tri::indeterminate;
  Verdict verdict = Verdict::indeterminate;
  /// Eigenvalue with the largest |real part| when the spectrum is off-axis.
  std::optional<std::complex<double>> offending_eigenvalue;
  std::optional<std::complex<double>> defective_eigenvalue;
  Spectrum spectrum;
  std::string axis_certificate;
  std::string semisimple_certificate;
  bool exact = true;
  /// Absolute tolerance of the float backend; 0 for exact results.
  double tolerance = 0.0;
  /// True when a nonstandard Omega was reduced to J by congruence.
  bool reduced = false;
};

/// Classifies Omega*B (Omega = J when absent). A nonstandard Omega is first
/// written as Q J Q^T and J (Q^T B Q) is classified instead.
/// Throws ShapeError for odd or mismatched dimensions and
/// std::invalid_argument when B is not symmetric or Omega not skew.
StabilityClassification classify(const RatMatrix& b, const std::optional<RatMatrix>& omega = std::nullopt);

/// Float backend: the verdict is indeterminate whenever the on-axis test or
/// the semisimplicity test lands inside its tolerance band.
StabilityClassification classify(const numeric::MatrixXd& b, const std::optional<numeric::MatrixXd>& omega,
                                 const numeric::Tolerance& tol = {});

enum class ParityReason { none, odd_index, odd_nullity };

const char* to_string(ParityReason r);

/// The parity rule: odd Morse index or odd nullity forces linear instability.
struct TheoremVerdict {
  int morse_index = 0;
  int nullity = 0;
  bool predicts_instability = false;
  /// odd_index takes precedence when both are odd.
  ParityReason reason = ParityReason::none;
};

TheoremVerdict theorem_predict(const IndexReport& index);
TheoremVerdict theorem_predict(const RatMatrix& b);
TheoremVerdict theorem_predict(const numeric::MatrixXd& b, const numeric::Tolerance& tol = {});

enum class KernelInvariance {
  j_invariant,             // J ker B = ker B, so dim ker B is even
  not_invariant_witness,   // w with JBw != 0 and (JB)^2 w = 0: JB is not semisimple
  not_invariant_no_witness // ker(JB) meets range(JB) trivially: zero eigenvalue is semisimple
};

const char* to_string(KernelInvariance k);

struct KernelInvarianceResult {
  KernelInvariance outcome = KernelInvariance::j_invariant;
  RatSubspace kernel;
  bool even_dimension = true;
  std::optional<RatVector> witness;
  /// JB * witness (nonzero when a witness exists).
  RatVector jb_witness;
  /// The witness came from pulling back the first basis vector of the
  /// W-component of J ker B; false when the general construction was needed.
  bool from_split_construction = false;
};

/// Decides whether ker B is J-invariant. Exact backend only.
KernelInvarianceResult kernel_invariance_test(const RatMatrix& b);

struct EvenIndexCheck {
  int morse_index = 0;
  bool index_odd = false;
  Verdict verdict = Verdict::indeterminate;
  /// sign of det(Omega B); positive whenever Omega B is spectrally stable.
  int det_sign = 0;
  /// The implication "spectrally stable => even index" holds on this instance.
  bool consistent = false;
};

/// For invertible B: odd Morse index must come with spectral instability.
/// Throws std::domain_error when B is singular.
EvenIndexCheck invertible_even_index_check(const RatMatrix& b, const std::optional<RatMatrix>& omega = std::nullopt);

class KernelNotInvariant : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct InvariantSplit {
  RatSubspace kernel;
  RatSubspace complement;   // Euclidean orthogonal complement of ker B
  RatMatrix restricted_form;
};

/// Splits R^2n = ker B + (ker B)^perp when ker B is J-invariant; the
/// complement is then J- and B-invariant with B an isomorphism on it.
/// Throws KernelNotInvariant otherwise.
InvariantSplit invariant_split(const RatMatrix& b);

enum class CertificateConclusion { spectrally_unstable, no_conclusion, hypotheses_failed };

const char* to_string(CertificateConclusion c);

struct InstabilityCertificate {
  bool j_invariant = false;
  bool b_invariant = false;
  bool b_isomorphism = false;
  std::optional<IndexReport> restricted_index;
  CertificateConclusion conclusion = CertificateConclusion::hypotheses_failed;
  RatSubspace subspace;
};

/// Odd Morse index of B on a J- and B-invariant subspace where B is an
/// isomorphism certifies spectral instability. Without W, uses the
/// complement from invariant_split (the whole space when B is invertible).
InstabilityCertificate spectral_instability_certificate(const RatMatrix& b,
                                                        const std::optional<RatSubspace>& w = std::nullopt);

enum class BlockForm { zero, nilpotent_jordan, imaginary_pair, real_pair };

const char* to_string(BlockForm f);

/// Normal form of [[0, -b_nk], [b_k, 0]], the restriction of JB to the
/// coordinate plane span{e_k, e_{n+k}} when B is diagonal.
struct BlockNormalForm {
  BlockForm form = BlockForm::zero;
  /// lambda^2 = -b_k * b_nk.
  Rational eigenvalue_square;
  /// sqrt(|lambda^2|) when it is rational.
  std::optional<Rational> exact_modulus;
  /// The eigenvalue with nonnegative real and imaginary part; its negative is the other.
  std::complex<double> eigenvalue;
};

BlockNormalForm block_normal_form(const Rational& b_k, const Rational& b_nk);

struct BlockNormalFormF {
  BlockForm form = BlockForm::zero;
  std::complex<double> eigenvalue;
};

BlockNormalFormF block_normal_form(double b_k, double b_nk);

RatMatrix block_matrix(const Rational& b_k, const Rational& b_nk);

}  // namespace relequil
