#include <gtest/gtest.h>

#include "relequil/stability.hpp"
#include "support.hpp"

namespace relequil {
namespace {

RatMatrix diag(std::initializer_list<long> v) {
  std::vector<Rational> e;
  for (long x : v) e.push_back(Rational(x));
  return RatMatrix::diagonal(e);
}

RatMatrix counterexample() { return diag({-2, -1, 1, -1, 0, 0}); }

RatSubspace coordinate_subspace(std::size_t ambient, std::initializer_list<std::size_t> axes) {
  RatSubspace w{ambient, RatMatrix(ambient, axes.size())};
  std::size_t c = 0;
  for (std::size_t a : axes) w.basis(a, c++) = 1;
  return w;
}

bool same_span(const RatSubspace& a, const RatSubspace& b) {
  return a.dim() == b.dim() && is_subspace_of(a, b) && is_subspace_of(b, a);
}

RatVector unit(std::size_t n, std::size_t i) {
  RatVector v(n, Rational(0));
  v[i] = 1;
  return v;
}

bool is_zero(const RatVector& v) {
  return std::all_of(v.begin(), v.end(), [](const Rational& x) { return x == 0; });
}

// ------------------------------------------------------------------ classify

TEST(Classify, IdentityIsLinearlyStable) {
  for (std::size_t n = 1; n <= 4; ++n) EXPECT_EQ(classify(RatMatrix::identity(2 * n)).verdict, Verdict::linearly_stable);
}

TEST(Classify, Counterexample) {
  StabilityClassification c = classify(counterexample());
  EXPECT_EQ(c.verdict, Verdict::spectrally_stable_not_linear);
  EXPECT_EQ(c.spectrum_on_axis, Tri::yes);
  EXPECT_EQ(c.semisimple, Tri::no);
  EXPECT_TRUE(c.exact);
}

TEST(Classify, HyperbolicBlockIsSpectrallyUnstable) {
  StabilityClassification c = classify(diag({1, -1}));
  EXPECT_EQ(c.verdict, Verdict::spectrally_unstable);
  ASSERT_TRUE(c.offending_eigenvalue);
  EXPECT_NEAR(std::abs(c.offending_eigenvalue->real()), 1.0, 1e-12);
  EXPECT_NEAR(c.offending_eigenvalue->imag(), 0.0, 1e-12);
}

TEST(Classify, VerdictInvariantsOnRandomInput) {
  std::mt19937_64 rng(testing::seed() + 10);
  for (int k = 0; k < 80; ++k) {
    RatMatrix b = testing::random_symmetric(rng, 2 * (1 + static_cast<std::size_t>(k % 3)), 0.5);
    StabilityClassification c = classify(b);
    EXPECT_EQ(c.verdict == Verdict::linearly_stable, c.spectrum_on_axis == Tri::yes && c.semisimple == Tri::yes);
    EXPECT_EQ(c.verdict == Verdict::spectrally_unstable, c.spectrum_on_axis == Tri::no);
    // Independent on-axis check from the spectrum itself.
    bool on_axis = true;
    for (const auto& e : c.spectrum) on_axis = on_axis && std::abs(e.value.real()) <= e.radius + 1e-9;
    if (c.spectrum_on_axis == Tri::yes) {
      EXPECT_TRUE(on_axis);
    }
  }
}

TEST(Classify, NonstandardOmegaReducesByCongruence) {
  // Omega = 2J; Omega B has the spectrum of J (2B).
  RatMatrix omega = symplectic_unit<Rational>(2) * Rational(2);
  std::mt19937_64 rng(testing::seed() + 11);
  for (int k = 0; k < 20; ++k) {
    RatMatrix b = testing::random_symmetric(rng, 4, 0.5);
    StabilityClassification a = classify(b, omega);
    StabilityClassification ref = classify(b * Rational(2));
    EXPECT_TRUE(a.reduced);
    EXPECT_EQ(a.verdict, ref.verdict);
  }
}

TEST(Classify, ShapeAndSymmetryErrors) {
  EXPECT_THROW(classify(RatMatrix::identity(3)), ShapeError);
  RatMatrix a{{Rational(1), Rational(2)}, {Rational(0), Rational(1)}};
  EXPECT_THROW(classify(a), std::invalid_argument);
  EXPECT_THROW(classify(RatMatrix::identity(2), RatMatrix::identity(2)), std::invalid_argument);
}

TEST(Classify, FloatBackendMatchesExactAwayFromBoundaries) {
  std::mt19937_64 rng(testing::seed() + 12);
  int decided = 0;
  for (int k = 0; k < 80; ++k) {
    RatMatrix b = testing::random_symmetric(rng, 4, 0.3);
    StabilityClassification f = classify(numeric::to_eigen(b), std::nullopt);
    if (f.verdict == Verdict::indeterminate) continue;
    ++decided;
    EXPECT_EQ(f.verdict, classify(b).verdict) << "sample " << k;
    EXPECT_GT(f.tolerance, 0.0);
  }
  EXPECT_GT(decided, 40);
}

TEST(Classify, FloatBackendIsIndeterminateForDefectiveZero) {
  StabilityClassification f = classify(numeric::to_eigen(counterexample()), std::nullopt);
  EXPECT_NE(f.verdict, Verdict::linearly_stable);
}

// ------------------------------------------------------------ theorem_predict

TEST(TheoremPredict, Examples) {
  TheoremVerdict ce = theorem_predict(counterexample());
  EXPECT_TRUE(ce.predicts_instability);
  EXPECT_EQ(ce.reason, ParityReason::odd_index);
  EXPECT_EQ(ce.morse_index, 3);

  TheoremVerdict id = theorem_predict(RatMatrix::identity(4));
  EXPECT_FALSE(id.predicts_instability);
  EXPECT_EQ(id.reason, ParityReason::none);

  TheoremVerdict nil = theorem_predict(diag({0, 1}));
  EXPECT_TRUE(nil.predicts_instability);
  EXPECT_EQ(nil.reason, ParityReason::odd_nullity);
  // JB = [[0, -1], [0, 0]] is nilpotent and nonzero.
  RatMatrix jb = symplectic_unit<Rational>(1) * diag({0, 1});
  EXPECT_FALSE(jb.is_zero());
  EXPECT_TRUE((jb * jb).is_zero());
  EXPECT_NE(classify(diag({0, 1})).verdict, Verdict::linearly_stable);
}

TEST(TheoremPredict, OddIndexTakesPrecedence) {
  TheoremVerdict v = theorem_predict(IndexReport{1, 1, 0, 2});
  EXPECT_EQ(v.reason, ParityReason::odd_index);
}

TEST(TheoremPredict, ParityRuleNeverContradictsClassify) {
  std::mt19937_64 rng(testing::seed() + 13);
  for (int k = 0; k < 200; ++k) {
    RatMatrix b = testing::random_symmetric(rng, 2 * (1 + static_cast<std::size_t>(k % 4)), 0.4);
    TheoremVerdict v = theorem_predict(b);
    EXPECT_EQ(v.predicts_instability, v.morse_index % 2 == 1 || v.nullity % 2 == 1);
    if (v.predicts_instability) {
      EXPECT_NE(classify(b).verdict, Verdict::linearly_stable) << "sample " << k;
    }
  }
}

// ----------------------------------------------------------- kernel invariance

TEST(KernelInvariance, TwoByTwoWitness) {
  KernelInvarianceResult r = kernel_invariance_test(diag({0, 1}));
  EXPECT_EQ(r.outcome, KernelInvariance::not_invariant_witness);
  ASSERT_TRUE(r.witness);
  EXPECT_EQ(*r.witness, unit(2, 1));
  RatMatrix jb = symplectic_unit<Rational>(1) * diag({0, 1});
  // JBw = -e1 under J = [[0, -1], [1, 0]]; nonzero either way.
  EXPECT_FALSE(is_zero(jb * *r.witness));
  EXPECT_TRUE(is_zero(jb * (jb * *r.witness)));
}

TEST(KernelInvariance, ZeroMatrixIsInvariant) {
  KernelInvarianceResult r = kernel_invariance_test(RatMatrix(4, 4));
  EXPECT_EQ(r.outcome, KernelInvariance::j_invariant);
  EXPECT_EQ(r.kernel.dim(), 4u);
  EXPECT_TRUE(r.even_dimension);
}

TEST(KernelInvariance, CounterexampleKernelMapsIntoOtherPlanes) {
  KernelInvarianceResult r = kernel_invariance_test(counterexample());
  EXPECT_EQ(r.outcome, KernelInvariance::not_invariant_witness);
  ASSERT_TRUE(same_span(r.kernel, coordinate_subspace(6, {4, 5})));
  RatSubspace image{6, symplectic_unit<Rational>(3) * r.kernel.basis};
  EXPECT_TRUE(same_span(image, coordinate_subspace(6, {1, 2})));
}

TEST(KernelInvariance, WitnessAlwaysVerifiesOnRandomInput) {
  std::mt19937_64 rng(testing::seed() + 14);
  int witnesses = 0;
  for (int k = 0; k < 150; ++k) {
    RatMatrix b = testing::random_symmetric(rng, 2 * (1 + static_cast<std::size_t>(k % 3)), 0.6);
    KernelInvarianceResult r = kernel_invariance_test(b);
    const RatMatrix jb = symplectic_unit<Rational>(b.rows() / 2) * b;
    RatSubspace image{b.rows(), symplectic_unit<Rational>(b.rows() / 2) * r.kernel.basis};
    const bool invariant = is_subspace_of(image, r.kernel);
    EXPECT_EQ(r.outcome == KernelInvariance::j_invariant, invariant);
    if (invariant) {
      EXPECT_EQ(r.kernel.dim() % 2, 0u);
    }
    if (r.witness) {
      ++witnesses;
      EXPECT_FALSE(is_zero(jb * *r.witness));
      EXPECT_TRUE(is_zero(jb * (jb * *r.witness)));
      EXPECT_EQ(is_semisimple(jb).semisimple, Tri::no);
    }
    if (r.outcome == KernelInvariance::not_invariant_no_witness) {
      // No witness means the zero eigenvalue is semisimple; JB may still be
      // defective elsewhere.
      EXPECT_EQ(rank(jb), rank(jb * jb));
    }
  }
  EXPECT_GT(witnesses, 10);
}

TEST(KernelInvariance, NonCoordinateKernelWithoutWitness) {
  // ker B = span{e1, e2 + e3} is not J-invariant, yet JB is diagonalizable:
  // the "not J-invariant implies not semisimple" claim fails here.
  RatMatrix b{{0, 0, 0, 0}, {0, 1, -1, 0}, {0, -1, 1, 0}, {0, 0, 0, 1}};
  KernelInvarianceResult r = kernel_invariance_test(b);
  EXPECT_EQ(r.outcome, KernelInvariance::not_invariant_no_witness);
  EXPECT_FALSE(r.witness);
  RatMatrix jb = symplectic_unit<Rational>(2) * b;
  EXPECT_EQ(is_semisimple(jb).semisimple, Tri::yes);
  EXPECT_EQ(classify(b).verdict, Verdict::linearly_stable);
}

// --------------------------------------------------------------- even index

TEST(EvenIndex, Examples) {
  EvenIndexCheck a = invertible_even_index_check(diag({-1, 1}));
  EXPECT_EQ(a.morse_index, 1);
  EXPECT_TRUE(a.index_odd);
  EXPECT_EQ(a.verdict, Verdict::spectrally_unstable);
  EXPECT_TRUE(a.consistent);

  EvenIndexCheck b = invertible_even_index_check(diag({-1, -1}));
  EXPECT_FALSE(b.index_odd);
  EXPECT_TRUE(b.consistent);

  EvenIndexCheck c = invertible_even_index_check(diag({-1, -2, -3, -4}));
  EXPECT_EQ(c.morse_index, 4);
  EXPECT_EQ(c.det_sign, 1);
  // det(JB) = det(J) det(B) = 1 * 24
  EXPECT_EQ(testing::det_oracle(symplectic_unit<Rational>(2) * diag({-1, -2, -3, -4})), Rational(24));
  EXPECT_TRUE(c.consistent);

  EXPECT_THROW(invertible_even_index_check(diag({0, 1})), std::domain_error);
}

TEST(EvenIndex, ConsistentOnRandomInvertibleInput) {
  std::mt19937_64 rng(testing::seed() + 15);
  for (int k = 0; k < 80; ++k) {
    RatMatrix b = testing::random_symmetric(rng, 2 * (1 + static_cast<std::size_t>(k % 3)), 0.2);
    if (determinant(b) == 0) continue;
    EvenIndexCheck e = invertible_even_index_check(b);
    EXPECT_TRUE(e.consistent);
    EXPECT_EQ(e.det_sign, sgn(testing::det_oracle(symplectic_unit<Rational>(b.rows() / 2) * b)));
  }
}

// ------------------------------------------------------------ invariant split

TEST(InvariantSplit, Examples) {
  InvariantSplit s = invariant_split(diag({0, 1, 0, -1}));
  EXPECT_TRUE(same_span(s.kernel, coordinate_subspace(4, {0, 2})));
  EXPECT_TRUE(same_span(s.complement, coordinate_subspace(4, {1, 3})));
  EXPECT_EQ(inertia(s.restricted_form), (IndexReport{1, 0, 1, 2}));

  InvariantSplit inv = invariant_split(diag({1, 2, 3, 4}));
  EXPECT_EQ(inv.kernel.dim(), 0u);
  EXPECT_EQ(inv.complement.dim(), 4u);

  InvariantSplit zero = invariant_split(RatMatrix(4, 4));
  EXPECT_EQ(zero.kernel.dim(), 4u);
  EXPECT_EQ(zero.complement.dim(), 0u);

  EXPECT_THROW(invariant_split(counterexample()), KernelNotInvariant);
}

TEST(InvariantSplit, FeedsCertificateHypotheses) {
  std::mt19937_64 rng(testing::seed() + 16);
  int used = 0;
  for (int k = 0; k < 100; ++k) {
    RatMatrix b = testing::random_symmetric(rng, 4, 0.5);
    InvariantSplit s;
    try {
      s = invariant_split(b);
    } catch (const KernelNotInvariant&) {
      continue;
    }
    ++used;
    RatMatrix j = symplectic_unit<Rational>(2);
    EXPECT_TRUE(is_invariant(s.complement, j));
    EXPECT_TRUE(is_invariant(s.complement, b));
    EXPECT_EQ(rank(b * s.complement.basis), s.complement.dim());
    InstabilityCertificate c = spectral_instability_certificate(b, s.complement);
    EXPECT_TRUE(c.j_invariant && c.b_invariant && c.b_isomorphism);
    if (c.conclusion == CertificateConclusion::spectrally_unstable) {
      EXPECT_EQ(classify(b).verdict, Verdict::spectrally_unstable);
    }
  }
  EXPECT_GT(used, 20);
}

// ---------------------------------------------------------------- certificate

TEST(Certificate, Examples) {
  RatSubspace plane = coordinate_subspace(2, {0, 1});
  InstabilityCertificate a = spectral_instability_certificate(diag({1, -1}), plane);
  EXPECT_EQ(a.conclusion, CertificateConclusion::spectrally_unstable);
  ASSERT_TRUE(a.restricted_index);
  EXPECT_EQ(a.restricted_index->morse_index, 1);

  EXPECT_EQ(spectral_instability_certificate(diag({1, 1}), plane).conclusion, CertificateConclusion::no_conclusion);

  InstabilityCertificate c = spectral_instability_certificate(diag({0, 1, 0, -1}));
  EXPECT_EQ(c.conclusion, CertificateConclusion::spectrally_unstable);
  EXPECT_EQ(c.restricted_index->morse_index, 1);
  EXPECT_TRUE(same_span(c.subspace, coordinate_subspace(4, {1, 3})));
}

TEST(Certificate, ReportsFailedHypothesesIndividually) {
  // span{e1} is not J-invariant in R^2.
  InstabilityCertificate a = spectral_instability_certificate(diag({1, 2}), coordinate_subspace(2, {0}));
  EXPECT_EQ(a.conclusion, CertificateConclusion::hypotheses_failed);
  EXPECT_FALSE(a.j_invariant);
  EXPECT_TRUE(a.b_invariant);
  // The whole space with singular B: J- and B-invariant but B is not an isomorphism.
  InstabilityCertificate b = spectral_instability_certificate(diag({0, 1, 0, 1}), coordinate_subspace(4, {0, 1, 2, 3}));
  EXPECT_TRUE(b.j_invariant);
  EXPECT_TRUE(b.b_invariant);
  EXPECT_FALSE(b.b_isomorphism);
  EXPECT_EQ(b.conclusion, CertificateConclusion::hypotheses_failed);
}

// ----------------------------------------------------------------- blocks

TEST(BlockNormalForm, Cases) {
  BlockNormalForm a = block_normal_form(Rational(1), Rational(2));
  EXPECT_EQ(a.form, BlockForm::imaginary_pair);
  EXPECT_NEAR(a.eigenvalue.imag(), std::sqrt(2.0), 1e-15);
  EXPECT_EQ(a.eigenvalue.real(), 0.0);

  BlockNormalForm b = block_normal_form(Rational(1), Rational(0));
  EXPECT_EQ(b.form, BlockForm::nilpotent_jordan);

  BlockNormalForm c = block_normal_form(Rational(1), Rational(-3));
  EXPECT_EQ(c.form, BlockForm::real_pair);
  EXPECT_NEAR(c.eigenvalue.real(), std::sqrt(3.0), 1e-15);

  EXPECT_EQ(block_normal_form(Rational(0), Rational(0)).form, BlockForm::zero);

  BlockNormalForm d = block_normal_form(make_rational(1, 2), Rational(8));
  ASSERT_TRUE(d.exact_modulus);
  EXPECT_EQ(*d.exact_modulus, Rational(2));
}

TEST(BlockNormalForm, AgreesWithSpectrumAndJordanDetector) {
  std::mt19937_64 rng(testing::seed() + 17);
  for (int k = 0; k < 150; ++k) {
    const Rational bk = testing::small_rational(rng), bnk = testing::small_rational(rng);
    BlockNormalForm f = block_normal_form(bk, bnk);
    RatMatrix m = block_matrix(bk, bnk);
    const RatMatrix diag_block{{bk, Rational(0)}, {Rational(0), bnk}};
    EXPECT_EQ(m, symplectic_unit<Rational>(1) * diag_block);
    Spectrum s = complex_spectrum(m);
    const Tri ss = is_semisimple(m).semisimple;
    switch (f.form) {
      case BlockForm::zero:
        EXPECT_TRUE(m.is_zero());
        break;
      case BlockForm::nilpotent_jordan:
        EXPECT_EQ(ss, Tri::no);
        ASSERT_EQ(s.size(), 1u);
        EXPECT_EQ(s[0].multiplicity, 2);
        break;
      case BlockForm::imaginary_pair:
      case BlockForm::real_pair:
        EXPECT_EQ(ss, Tri::yes);
        ASSERT_EQ(s.size(), 2u);
        for (const auto& e : s) EXPECT_NEAR(std::abs(std::abs(e.value) - std::abs(f.eigenvalue)), 0.0, 1e-12);
        EXPECT_EQ(f.form == BlockForm::real_pair, s[0].real);
        break;
    }
    BlockNormalFormF g = block_normal_form(to_double(bk), to_double(bnk));
    EXPECT_EQ(g.form, f.form);
    EXPECT_NEAR(std::abs(g.eigenvalue - f.eigenvalue), 0.0, 1e-12);
  }
}

}  // namespace
}  // namespace relequil
