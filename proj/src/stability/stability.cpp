#include "relequil/stability.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace relequil {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::spectrally_unstable: return "spectrally_unstable";
    case Verdict::spectrally_stable_not_linear: return "spectrally_stable_not_linear";
    case Verdict::linearly_stable: return "linearly_stable";
    case Verdict::indeterminate: return "indeterminate";
  }
  return "indeterminate";
}

const char* to_string(ParityReason r) {
  switch (r) {
    case ParityReason::none: return "none";
    case ParityReason::odd_index: return "odd_index";
    case ParityReason::odd_nullity: return "odd_nullity";
  }
  return "none";
}

const char* to_string(KernelInvariance k) {
  switch (k) {
    case KernelInvariance::j_invariant: return "j_invariant";
    case KernelInvariance::not_invariant_witness: return "not_j_invariant";
    case KernelInvariance::not_invariant_no_witness: return "not_j_invariant_semisimple_at_zero";
  }
  return "j_invariant";
}

const char* to_string(CertificateConclusion c) {
  switch (c) {
    case CertificateConclusion::spectrally_unstable: return "spectrally_unstable";
    case CertificateConclusion::no_conclusion: return "no_conclusion";
    case CertificateConclusion::hypotheses_failed: return "hypotheses_failed";
  }
  return "hypotheses_failed";
}

const char* to_string(BlockForm f) {
  switch (f) {
    case BlockForm::zero: return "zero";
    case BlockForm::nilpotent_jordan: return "nilpotent_jordan";
    case BlockForm::imaginary_pair: return "imaginary_pair";
    case BlockForm::real_pair: return "real_pair";
  }
  return "zero";
}

namespace {

Verdict combine(Tri on_axis, Tri semisimple) {
  if (on_axis == Tri::no) return Verdict::spectrally_unstable;
  if (on_axis == Tri::indeterminate) return Verdict::indeterminate;
  if (semisimple == Tri::yes) return Verdict::linearly_stable;
  if (semisimple == Tri::no) return Verdict::spectrally_stable_not_linear;
  return Verdict::indeterminate;
}

std::size_t half_dimension(std::size_t rows, std::size_t cols, const char* what) {
  if (rows != cols) {
    std::ostringstream os;
    os << what << ": expected a square matrix, got " << rows << "x" << cols;
    throw ShapeError(os.str());
  }
  if (rows == 0 || rows % 2 != 0) {
    std::ostringstream os;
    os << what << ": dimension must be even and positive, got " << rows;
    throw ShapeError(os.str());
  }
  return rows / 2;
}

std::optional<std::complex<double>> farthest_off_axis(const Spectrum& s) {
  std::optional<std::complex<double>> best;
  for (const auto& e : s)
    if (!best || std::abs(e.value.real()) > std::abs(best->real())) best = e.value;
  return best;
}

}  // namespace

StabilityClassification classify(const RatMatrix& b, const std::optional<RatMatrix>& omega) {
  const std::size_t n = half_dimension(b.rows(), b.cols(), "classify");
  if (!b.is_symmetric()) throw std::invalid_argument("classify: B is not symmetric");
  StabilityClassification out;
  out.exact = true;
  RatMatrix reduced = b;
  if (omega) {
    if (omega->rows() != b.rows() || omega->cols() != b.cols())
      throw ShapeError("classify: Omega and B have different shapes");
    RatMatrix q = symplectic_reduction(*omega);
    reduced = q.transpose() * b * q;
    out.reduced = true;
  }
  RatMatrix a = symplectic_unit<Rational>(n) * reduced;

  Polynomial p = characteristic_polynomial(a);
  std::ostringstream axis;
  if (!p.is_even()) {
    out.spectrum_on_axis = Tri::no;
    axis << "characteristic polynomial " << p.to_string("x") << " is not even";
  } else {
    // All eigenvalues are imaginary iff p(x) = r(x^2) with r having only real
    // roots, all <= 0.
    Polynomial r = p.even_part_in_square();
    Polynomial sr = square_free_part(r);
    int nonpositive = sr.degree() <= 0 ? 0 : count_real_roots_below(sr, Rational(0));
    int distinct = std::max(sr.degree(), 0);
    out.spectrum_on_axis = nonpositive == distinct ? Tri::yes : Tri::no;
    axis << "p(x) = r(x^2), r(y) = " << r.to_string("y") << "; " << nonpositive << " of " << distinct
         << " distinct roots of r are real and <= 0";
  }
  out.axis_certificate = axis.str();
  out.spectrum = complex_spectrum(a);
  if (out.spectrum_on_axis == Tri::no) out.offending_eigenvalue = farthest_off_axis(out.spectrum);

  SemisimpleReport ss = is_semisimple(a);
  out.semisimple = ss.semisimple;
  out.defective_eigenvalue = ss.defective_eigenvalue;
  out.semisimple_certificate = ss.certificate;
  out.verdict = combine(out.spectrum_on_axis, out.semisimple);
  return out;
}

StabilityClassification classify(const numeric::MatrixXd& b, const std::optional<numeric::MatrixXd>& omega,
                                 const numeric::Tolerance& tol) {
  const auto n = static_cast<Eigen::Index>(
      half_dimension(static_cast<std::size_t>(b.rows()), static_cast<std::size_t>(b.cols()), "classify"));
  numeric::MatrixXd reduced = numeric::symmetrized(b, tol.for_matrix(b));
  StabilityClassification out;
  out.exact = false;
  if (omega) {
    if (omega->rows() != b.rows() || omega->cols() != b.cols())
      throw ShapeError("classify: Omega and B have different shapes");
    numeric::MatrixXd q = numeric::symplectic_reduction(*omega, tol);
    reduced = q.transpose() * reduced * q;
    out.reduced = true;
  }
  numeric::MatrixXd a = numeric::symplectic_unit(n) * reduced;
  const double t = tol.for_matrix(a);
  out.tolerance = t;
  out.spectrum = numeric::complex_spectrum(a, tol);
  out.spectrum_on_axis = Tri::yes;
  double worst = 0.0;
  for (const auto& e : out.spectrum) {
    double re = std::abs(e.value.real());
    worst = std::max(worst, re);
    if (re > 100.0 * t) {
      out.spectrum_on_axis = Tri::no;
    } else if ((re > t || (e.multiplicity > 1 && e.radius > 100.0 * t)) && out.spectrum_on_axis != Tri::no) {
      // A spread cluster may be a split Jordan block or nearby distinct eigenvalues.
      out.spectrum_on_axis = Tri::indeterminate;
    }
  }
  std::ostringstream axis;
  axis << "max |Re lambda| = " << worst << " against tolerance " << t;
  out.axis_certificate = axis.str();
  if (out.spectrum_on_axis == Tri::no) out.offending_eigenvalue = farthest_off_axis(out.spectrum);
  SemisimpleReport ss = numeric::is_semisimple(a, tol);
  out.semisimple = ss.semisimple;
  out.defective_eigenvalue = ss.defective_eigenvalue;
  out.semisimple_certificate = ss.certificate;
  out.verdict = combine(out.spectrum_on_axis, out.semisimple);
  return out;
}

TheoremVerdict theorem_predict(const IndexReport& index) {
  TheoremVerdict v;
  v.morse_index = index.morse_index;
  v.nullity = index.nullity;
  if (index.morse_index % 2 != 0) {
    v.reason = ParityReason::odd_index;
  } else if (index.nullity % 2 != 0) {
    v.reason = ParityReason::odd_nullity;
  }
  v.predicts_instability = v.reason != ParityReason::none;
  return v;
}

TheoremVerdict theorem_predict(const RatMatrix& b) { return theorem_predict(inertia(b)); }

TheoremVerdict theorem_predict(const numeric::MatrixXd& b, const numeric::Tolerance& tol) {
  return theorem_predict(numeric::inertia(b, tol));
}

namespace {

// Some w in W = span(w_basis) with B w = target, where target lies in W and
// B maps W onto itself.
RatVector pull_back(const RatMatrix& b, const RatSubspace& w, const RatVector& target) {
  RatMatrix gram = restrict_form(b, w);
  RatVector rhs = w.basis.transpose() * target;
  auto coeffs = solve(gram, rhs);
  if (!coeffs) throw std::logic_error("pull_back: B is not an isomorphism on the complement of its kernel");
  return w.basis * *coeffs;
}

bool is_zero_vector(const RatVector& v) {
  return std::all_of(v.begin(), v.end(), [](const Rational& x) { return sgn(x) == 0; });
}

}  // namespace

KernelInvarianceResult kernel_invariance_test(const RatMatrix& b) {
  const std::size_t n = half_dimension(b.rows(), b.cols(), "kernel_invariance_test");
  if (!b.is_symmetric()) throw std::invalid_argument("kernel_invariance_test: B is not symmetric");
  const RatMatrix j = symplectic_unit<Rational>(n);
  const RatMatrix jb = j * b;
  KernelInvarianceResult out;
  out.kernel = kernel(b);
  out.even_dimension = out.kernel.dim() % 2 == 0;
  if (is_invariant(out.kernel, j)) {
    out.outcome = KernelInvariance::j_invariant;
    return out;
  }

  const RatSubspace w = orthogonal_complement(out.kernel);
  const RatMatrix& k = out.kernel.basis;
  auto verify = [&](const RatVector& cand) {
    RatVector first = jb * cand;
    if (is_zero_vector(first)) return false;
    if (!is_zero_vector(jb * first)) return false;
    out.witness = cand;
    out.jb_witness = first;
    return true;
  };

  // Proof construction: first nonzero W-component of J ker B, pulled back through B.
  {
    RatMatrix jk = j * k;
    RatMatrix ktk_inv = *inverse(k.transpose() * k);
    RatMatrix projected = jk - k * (ktk_inv * (k.transpose() * jk));
    for (std::size_t c = 0; c < projected.cols(); ++c) {
      RatVector u = projected.col(c);
      if (is_zero_vector(u)) continue;
      if (verify(pull_back(b, w, u))) {
        out.outcome = KernelInvariance::not_invariant_witness;
        out.from_split_construction = true;
        return out;
      }
      break;
    }
  }

  // General construction: x in ker B ∩ J range(B), then B w = -J x.
  RatMatrix jw = j * w.basis;
  RatMatrix system = hconcat(k, RatMatrix(-jw));
  RatSubspace sol = kernel(system);
  for (std::size_t c = 0; c < sol.dim(); ++c) {
    RatVector coeffs = sol.basis.col(c);
    RatVector a(coeffs.begin(), coeffs.begin() + static_cast<std::ptrdiff_t>(k.cols()));
    RatVector x = k * a;
    if (is_zero_vector(x)) continue;
    // J w' = x with w' in range(B) = W, so w' = -J x.
    RatVector target = j * x;
    for (auto& v : target) v = -v;
    if (verify(pull_back(b, w, target))) {
      out.outcome = KernelInvariance::not_invariant_witness;
      return out;
    }
  }
  out.outcome = KernelInvariance::not_invariant_no_witness;
  return out;
}

EvenIndexCheck invertible_even_index_check(const RatMatrix& b, const std::optional<RatMatrix>& omega) {
  const std::size_t n = half_dimension(b.rows(), b.cols(), "invertible_even_index_check");
  Rational det_b = determinant(b);
  if (sgn(det_b) == 0) throw std::domain_error("invertible_even_index_check: B is singular");
  EvenIndexCheck out;
  IndexReport idx = inertia(b);
  out.morse_index = idx.morse_index;
  out.index_odd = idx.morse_index % 2 != 0;
  StabilityClassification cls = classify(b, omega);
  out.verdict = cls.verdict;
  Rational det_omega = omega ? determinant(*omega) : determinant(symplectic_unit<Rational>(n));
  out.det_sign = sgn(det_omega) * sgn(det_b);
  const bool stable = cls.verdict != Verdict::spectrally_unstable;
  out.consistent = !(stable && (out.index_odd || out.det_sign <= 0));
  return out;
}

InvariantSplit invariant_split(const RatMatrix& b) {
  const std::size_t n = half_dimension(b.rows(), b.cols(), "invariant_split");
  if (!b.is_symmetric()) throw std::invalid_argument("invariant_split: B is not symmetric");
  const RatMatrix j = symplectic_unit<Rational>(n);
  InvariantSplit out;
  out.kernel = kernel(b);
  if (!is_invariant(out.kernel, j)) throw KernelNotInvariant("invariant_split: ker B is not J-invariant");
  out.complement = orthogonal_complement(out.kernel);
  if (!is_invariant(out.complement, j) || !is_invariant(out.complement, b) ||
      rank(b * out.complement.basis) != out.complement.dim()) {
    throw std::logic_error("invariant_split: complement failed its invariance checks");
  }
  out.restricted_form = restrict_form(b, out.complement);
  return out;
}

InstabilityCertificate spectral_instability_certificate(const RatMatrix& b, const std::optional<RatSubspace>& w) {
  const std::size_t n = half_dimension(b.rows(), b.cols(), "spectral_instability_certificate");
  if (!b.is_symmetric()) throw std::invalid_argument("spectral_instability_certificate: B is not symmetric");
  InstabilityCertificate out;
  if (w) {
    if (w->ambient != b.rows()) throw ShapeError("spectral_instability_certificate: subspace dimension mismatch");
    out.subspace = *w;
  } else {
    out.subspace = invariant_split(b).complement;
  }
  const RatMatrix j = symplectic_unit<Rational>(n);
  out.j_invariant = is_invariant(out.subspace, j);
  out.b_invariant = is_invariant(out.subspace, b);
  out.b_isomorphism = out.subspace.dim() == 0 || rank(b * out.subspace.basis) == out.subspace.dim();
  if (!out.j_invariant || !out.b_invariant || !out.b_isomorphism) {
    out.conclusion = CertificateConclusion::hypotheses_failed;
    return out;
  }
  out.restricted_index = inertia(restrict_form(b, out.subspace));
  out.conclusion = out.restricted_index->morse_index % 2 != 0 ? CertificateConclusion::spectrally_unstable
                                                              : CertificateConclusion::no_conclusion;
  return out;
}

BlockNormalForm block_normal_form(const Rational& b_k, const Rational& b_nk) {
  BlockNormalForm out;
  out.eigenvalue_square = -(b_k * b_nk);
  const int s = sgn(out.eigenvalue_square);
  if (s == 0) {
    out.form = (sgn(b_k) == 0 && sgn(b_nk) == 0) ? BlockForm::zero : BlockForm::nilpotent_jordan;
    out.exact_modulus = Rational(0);
    out.eigenvalue = {0.0, 0.0};
    return out;
  }
  Rational modulus_sq = abs(out.eigenvalue_square);
  Rational root;
  if (exact_sqrt(modulus_sq, root)) out.exact_modulus = root;
  const double modulus = std::sqrt(modulus_sq.get_d());
  if (s < 0) {
    out.form = BlockForm::imaginary_pair;
    out.eigenvalue = {0.0, modulus};
  } else {
    out.form = BlockForm::real_pair;
    out.eigenvalue = {modulus, 0.0};
  }
  return out;
}

BlockNormalFormF block_normal_form(double b_k, double b_nk) {
  BlockNormalFormF out;
  const double product = b_k * b_nk;
  if (product == 0.0) {
    out.form = (b_k == 0.0 && b_nk == 0.0) ? BlockForm::zero : BlockForm::nilpotent_jordan;
    return out;
  }
  const double modulus = std::sqrt(std::abs(product));
  if (product > 0.0) {
    out.form = BlockForm::imaginary_pair;
    out.eigenvalue = {0.0, modulus};
  } else {
    out.form = BlockForm::real_pair;
    out.eigenvalue = {modulus, 0.0};
  }
  return out;
}

RatMatrix block_matrix(const Rational& b_k, const Rational& b_nk) {
  return RatMatrix{{Rational(0), Rational(-b_nk)}, {b_k, Rational(0)}};
}

}  // namespace relequil
