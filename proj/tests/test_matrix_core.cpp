#include <gtest/gtest.h>

#include "relequil/linalg.hpp"
#include "relequil/numeric.hpp"
#include "support.hpp"

namespace relequil {
namespace {

using testing::inertia_oracle;

RatMatrix diag(std::initializer_list<long> v) {
  std::vector<Rational> e;
  for (long x : v) e.push_back(Rational(x));
  return RatMatrix::diagonal(e);
}

RatMatrix counterexample() { return diag({-2, -1, 1, -1, 0, 0}); }

bool has_eigenvalue(const Spectrum& s, std::complex<double> z, int mult, double tol = 1e-12) {
  for (const auto& e : s)
    if (std::abs(e.value - z) <= tol) return e.multiplicity == mult;
  return false;
}

// ------------------------------------------------------------------ rational

TEST(Rational, ParsesFractionsAndDecimals) {
  EXPECT_EQ(parse_rational("3/6"), make_rational(1, 2));
  EXPECT_EQ(parse_rational("-1.25"), make_rational(-5, 4));
  EXPECT_EQ(parse_rational("3e-2"), make_rational(3, 100));
  EXPECT_EQ(parse_rational("7"), Rational(7));
  EXPECT_THROW(parse_rational("1/0"), std::invalid_argument);
  EXPECT_THROW(parse_rational("abc"), std::invalid_argument);
}

TEST(Rational, StringRoundTrip) {
  std::mt19937_64 rng(testing::seed());
  for (int k = 0; k < 200; ++k) {
    Rational r = testing::small_rational(rng, 1000, 997);
    EXPECT_EQ(parse_rational(to_string(r)), r);
  }
}

TEST(Rational, FromDoubleIsExact) {
  EXPECT_EQ(from_double(0.5), make_rational(1, 2));
  EXPECT_EQ(to_double(from_double(0.1)), 0.1);
  EXPECT_NE(from_double(0.1), make_rational(1, 10));
}

TEST(Rational, ExactSqrt) {
  Rational root;
  EXPECT_TRUE(exact_sqrt(make_rational(9, 4), root));
  EXPECT_EQ(root, make_rational(3, 2));
  EXPECT_FALSE(exact_sqrt(Rational(2), root));
}

// ---------------------------------------------------------------- polynomial

TEST(Polynomial, SturmCountsMatchKnownRoots) {
  // (x - 1)(x - 2)(x + 3)
  Polynomial p = Polynomial::linear_root(1) * Polynomial::linear_root(2) * Polynomial::linear_root(-3);
  EXPECT_EQ(count_real_roots(p), 3);
  EXPECT_EQ(count_real_roots(p, Rational(0), Rational(2)), 2);  // half-open (0, 2]
  EXPECT_EQ(count_real_roots(p, Rational(1), Rational(2)), 1);
  EXPECT_EQ(count_real_roots_below(p, Rational(0)), 1);
  // x^2 + 1 has no real roots
  EXPECT_EQ(count_real_roots(Polynomial({Rational(1), Rational(0), Rational(1)})), 0);
}

TEST(Polynomial, IsolationSeparatesCloseRoots) {
  Polynomial p = Polynomial::linear_root(make_rational(1, 1000)) * Polynomial::linear_root(make_rational(2, 1000)) *
                 Polynomial({Rational(-2), Rational(0), Rational(1)});
  auto roots = isolate_real_roots(p);
  ASSERT_EQ(roots.size(), 4u);
  const double want[4] = {-std::sqrt(2.0), 1e-3, 2e-3, std::sqrt(2.0)};
  for (int i = 0; i < 4; ++i) {
    EXPECT_LE(to_double(roots[i].lo), want[i]);
    EXPECT_GE(to_double(roots[i].hi), want[i]);
  }
  RootInterval fine = refine_root(p, roots[3], make_rational(1, 1 << 30));
  EXPECT_NEAR(fine.midpoint(), std::sqrt(2.0), 1e-9);
}

TEST(Polynomial, SquareFreeDecomposition) {
  Polynomial x1 = Polynomial::linear_root(1), x2 = Polynomial::linear_root(-2);
  Polynomial p = x1 * x1 * x1 * x2 * Rational(5);
  auto dec = square_free_decomposition(p);
  ASSERT_EQ(dec.size(), 2u);
  Polynomial rebuilt = Polynomial::constant(p.leading());
  for (const auto& [f, k] : dec)
    for (int i = 0; i < k; ++i) rebuilt = rebuilt * f;
  EXPECT_EQ(rebuilt, p);
  EXPECT_EQ(square_free_part(p), (x1 * x2).monic());
}

TEST(Polynomial, InterpolationReproducesSamples) {
  std::vector<Rational> xs{0, 1, 2, 3}, ys{1, 3, make_rational(-1, 2), 7};
  Polynomial p = interpolate(xs, ys);
  EXPECT_LE(p.degree(), 3);
  for (std::size_t i = 0; i < xs.size(); ++i) EXPECT_EQ(p(xs[i]), ys[i]);
}

TEST(Polynomial, EvenPartAndComposition) {
  Polynomial r({Rational(2), Rational(-3), Rational(1)});  // y^2 - 3y + 2
  Polynomial p = r.compose_square();
  EXPECT_TRUE(p.is_even());
  EXPECT_EQ(p.even_part_in_square(), r);
  EXPECT_EQ(p.scale_argument(Rational(2))(Rational(1)), p(Rational(2)));
}

// ------------------------------------------------------------------- inertia

TEST(Inertia, CounterexampleTriple) {
  IndexReport r = inertia(counterexample());
  EXPECT_EQ(r, (IndexReport{3, 2, 1, 6}));
}

TEST(Inertia, IdentityIsPositiveDefinite) { EXPECT_EQ(inertia(RatMatrix::identity(4)), (IndexReport{0, 0, 4, 4})); }

TEST(Inertia, HilbertLikeWithSignFlipMatchesCharpolyOracle) {
  RatMatrix h(3, 3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) h(i, j) = make_rational(1, static_cast<long>(i + j + 1));
  h(0, 0) = -h(0, 0);
  EXPECT_EQ(inertia(h), inertia_oracle(h));
}

TEST(Inertia, AgreesWithCharpolyOracleOnRandomMatrices) {
  std::mt19937_64 rng(testing::seed());
  for (int k = 0; k < 150; ++k) {
    RatMatrix b = testing::random_symmetric(rng, 1 + static_cast<std::size_t>(k % 7), 0.4);
    ASSERT_EQ(inertia(b), inertia_oracle(b)) << "sample " << k;
  }
}

TEST(Inertia, SylvesterLawOfInertia) {
  std::mt19937_64 rng(testing::seed() + 1);
  for (int k = 0; k < 100; ++k) {
    const std::size_t n = 2 + static_cast<std::size_t>(k % 5);
    RatMatrix b = testing::random_symmetric(rng, n, 0.5);
    RatMatrix p = testing::random_invertible(rng, n);
    EXPECT_EQ(inertia(p.transpose() * b * p), inertia(b));
  }
}

TEST(Inertia, RejectsNonSymmetricAndNonSquare) {
  RatMatrix a{{Rational(1), Rational(2)}, {Rational(3), Rational(4)}};
  EXPECT_THROW(inertia(a), std::invalid_argument);
  EXPECT_THROW(inertia(RatMatrix(2, 3)), ShapeError);
}

TEST(Inertia, LdltReconstructsPermutedMatrix) {
  std::mt19937_64 rng(testing::seed() + 2);
  for (int k = 0; k < 100; ++k) {
    const std::size_t n = 1 + static_cast<std::size_t>(k % 6);
    RatMatrix b = testing::random_symmetric(rng, n, k % 3 == 0 ? 0.8 : 0.3);
    if (k % 5 == 0)
      for (std::size_t i = 0; i < n; ++i) b(i, i) = 0;  // forces 2x2 pivots
    LdltFactorization f = ldlt(b);
    RatMatrix pb(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) pb(i, j) = b(f.permutation[i], f.permutation[j]);
    EXPECT_EQ(f.lower * f.block_diagonal * f.lower.transpose(), pb);
    for (std::size_t i = 0; i < n; ++i) EXPECT_EQ(f.lower(i, i), 1);
  }
}

TEST(Inertia, FloatBackendAgreesOnWellSeparatedSpectra) {
  std::mt19937_64 rng(testing::seed() + 3);
  for (int k = 0; k < 100; ++k) {
    RatMatrix b = testing::random_symmetric(rng, 2 + static_cast<std::size_t>(k % 6));
    EXPECT_EQ(numeric::inertia(numeric::to_eigen(b)), inertia(b));
  }
}

// -------------------------------------------------------------------- kernel

TEST(Kernel, Examples) {
  RatSubspace k = kernel(diag({0, 1, 0, 1}));
  ASSERT_EQ(k.dim(), 2u);
  RatSubspace want{4, RatMatrix(4, 2)};
  want.basis(0, 0) = 1;
  want.basis(2, 1) = 1;
  EXPECT_TRUE(is_subspace_of(k, want));
  EXPECT_EQ(kernel(diag({1, 2, 3})).dim(), 0u);

  RatSubspace ce = kernel(counterexample());
  RatSubspace e56{6, RatMatrix(6, 2)};
  e56.basis(4, 0) = 1;
  e56.basis(5, 1) = 1;
  ASSERT_EQ(ce.dim(), 2u);
  EXPECT_TRUE(is_subspace_of(ce, e56));
}

TEST(Kernel, VectorsAreAnnihilated) {
  std::mt19937_64 rng(testing::seed() + 4);
  for (int k = 0; k < 50; ++k) {
    RatMatrix a = testing::random_symmetric(rng, 5, 0.6);
    RatSubspace ker = kernel(a);
    EXPECT_TRUE((a * ker.basis).is_zero());
    EXPECT_EQ(ker.dim() + rank(a), 5u);
  }
}

// ------------------------------------------------------------------ spectrum

TEST(Spectrum, SymplecticUnit) {
  Spectrum s = complex_spectrum(symplectic_unit<Rational>(1));
  ASSERT_EQ(s.size(), 2u);
  EXPECT_TRUE(has_eigenvalue(s, {0.0, 1.0}, 1));
  EXPECT_TRUE(has_eigenvalue(s, {0.0, -1.0}, 1));
}

TEST(Spectrum, CounterexampleFromBlockDecomposition) {
  // Independent route: each 2x2 block [[0, -b_nk], [b_k, 0]] has eigenvalues
  // +-sqrt(-b_k b_nk); the three blocks give (k = 1..3) pairs.
  const double b[6] = {-2, -1, 1, -1, 0, 0};
  std::vector<std::complex<double>> expected;
  for (int k = 0; k < 3; ++k) {
    std::complex<double> l = std::sqrt(std::complex<double>(-b[k] * b[k + 3], 0.0));
    expected.push_back(l);
    expected.push_back(-l);
  }
  Spectrum s = complex_spectrum(symplectic_unit<Rational>(3) * counterexample());
  EXPECT_EQ(total_multiplicity(s), 6);
  for (auto z : expected) {
    const int mult = static_cast<int>(std::count_if(expected.begin(), expected.end(), [&](auto w) { return std::abs(w - z) < 1e-12; }));
    EXPECT_TRUE(has_eigenvalue(s, z, mult)) << z;
  }
  EXPECT_TRUE(has_eigenvalue(s, {0.0, std::sqrt(2.0)}, 1));
  EXPECT_TRUE(has_eigenvalue(s, 0.0, 4));
}

TEST(Spectrum, RealSymmetricBlock) {
  Spectrum s = complex_spectrum(RatMatrix{{Rational(0), Rational(1)}, {Rational(1), Rational(0)}});
  EXPECT_TRUE(has_eigenvalue(s, 1.0, 1));
  EXPECT_TRUE(has_eigenvalue(s, -1.0, 1));
  for (const auto& e : s) EXPECT_TRUE(e.exact && e.real);
}

TEST(Spectrum, RadiusContainsTrueEigenvalue) {
  // Eigenvalues of [[1, 1], [1, 0]] are (1 +- sqrt 5) / 2.
  Spectrum s = complex_spectrum(RatMatrix{{Rational(1), Rational(1)}, {Rational(1), Rational(0)}});
  const double phi = (1 + std::sqrt(5.0)) / 2;
  ASSERT_EQ(s.size(), 2u);
  EXPECT_LE(std::abs(s[1].value - phi), s[1].radius + 1e-15);
}

// -------------------------------------------------------------- semisimple

TEST(Semisimple, JordanBlockIsDefective) {
  SemisimpleReport r = is_semisimple(RatMatrix{{Rational(0), Rational(1)}, {Rational(0), Rational(0)}});
  EXPECT_EQ(r.semisimple, Tri::no);
  ASSERT_TRUE(r.defective_eigenvalue);
  EXPECT_EQ(*r.defective_eigenvalue, std::complex<double>(0.0));
}

TEST(Semisimple, DiagonalMatricesAre) {
  std::mt19937_64 rng(testing::seed() + 5);
  for (int k = 0; k < 20; ++k) {
    std::vector<Rational> d;
    for (int i = 0; i < 5; ++i) d.push_back(testing::small_rational(rng, 2, 1));
    EXPECT_EQ(is_semisimple(RatMatrix::diagonal(d)).semisimple, Tri::yes);
  }
}

TEST(Semisimple, CounterexampleIsNot) {
  EXPECT_EQ(is_semisimple(symplectic_unit<Rational>(3) * counterexample()).semisimple, Tri::no);
}

TEST(Semisimple, BackendsAgreeWhenFloatDecides) {
  std::mt19937_64 rng(testing::seed() + 6);
  int decided = 0;
  for (int k = 0; k < 120; ++k) {
    RatMatrix b = testing::random_symmetric(rng, 4, 0.6);
    RatMatrix a = symplectic_unit<Rational>(2) * b;
    const Tri exact = is_semisimple(a).semisimple;
    const Tri approx = numeric::is_semisimple(numeric::to_eigen(a)).semisimple;
    if (approx == Tri::indeterminate) continue;
    ++decided;
    EXPECT_EQ(approx, exact) << "sample " << k;
  }
  EXPECT_GT(decided, 60);
}

// ------------------------------------------------------ symplectic reduction

RatMatrix jmat(std::size_t n) { return symplectic_unit<Rational>(n); }

TEST(SymplecticReduction, StandardFormIsIdentity) {
  EXPECT_EQ(symplectic_reduction(jmat(3)), RatMatrix::identity(6));
}

TEST(SymplecticReduction, ScaledForm) {
  RatMatrix omega = jmat(2) * Rational(2);
  RatMatrix q = symplectic_reduction(omega);
  EXPECT_EQ(q * jmat(2) * q.transpose(), omega);
  numeric::MatrixXd qf = numeric::symplectic_reduction(numeric::to_eigen(omega));
  EXPECT_LE((qf * numeric::symplectic_unit(2) * qf.transpose() - numeric::to_eigen(omega)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(SymplecticReduction, RandomSkewMultipliesBack) {
  std::mt19937_64 rng(testing::seed() + 7);
  int checked = 0;
  for (int k = 0; k < 40; ++k) {
    RatMatrix w(6, 6);
    for (std::size_t i = 0; i < 6; ++i)
      for (std::size_t j = i + 1; j < 6; ++j) {
        w(i, j) = testing::small_rational(rng);
        w(j, i) = -w(i, j);
      }
    if (determinant(w) == 0) {
      EXPECT_THROW(symplectic_reduction(w), std::domain_error);
      continue;
    }
    ++checked;
    RatMatrix q = symplectic_reduction(w);
    EXPECT_EQ(q * jmat(3) * q.transpose(), w);
    numeric::MatrixXd wf = numeric::to_eigen(w);
    numeric::MatrixXd qf = numeric::symplectic_reduction(wf);
    EXPECT_LE((qf * numeric::symplectic_unit(3) * qf.transpose() - wf).cwiseAbs().maxCoeff(),
              1e-9 * (1 + numeric::norm_inf(wf)));
  }
  EXPECT_GT(checked, 20);
}

TEST(SymplecticReduction, Errors) {
  EXPECT_THROW(symplectic_reduction(RatMatrix(3, 3)), ShapeError);
  EXPECT_THROW(symplectic_reduction(RatMatrix::identity(2)), std::invalid_argument);
  EXPECT_THROW(symplectic_reduction(RatMatrix(2, 2)), std::domain_error);
}

// ------------------------------------------------------------ restrict_form

TEST(RestrictForm, Examples) {
  RatSubspace w{4, RatMatrix(4, 2)};
  w.basis(1, 0) = 1;
  w.basis(3, 1) = 1;
  EXPECT_EQ(restrict_form(diag({1, -1, 2, -2}), w), diag({-1, -2}));
  RatSubspace full{3, RatMatrix::identity(3)};
  EXPECT_EQ(restrict_form(RatMatrix::identity(3), full), RatMatrix::identity(3));
  RatSubspace comp = orthogonal_complement(kernel(counterexample()));
  RatMatrix r = restrict_form(counterexample(), comp);
  EXPECT_EQ(inertia(r), (IndexReport{3, 0, 1, 4}));
  EXPECT_EQ(r, diag({-2, -1, 1, -1}));
}

TEST(RestrictForm, FloatOrthonormalBasis) {
  numeric::RealSubspace w{3, numeric::MatrixXd::Identity(3, 2)};
  numeric::MatrixXd b = numeric::MatrixXd::Identity(3, 3);
  EXPECT_TRUE(numeric::restrict_form(b, w).isApprox(numeric::MatrixXd::Identity(2, 2)));
}

// ---------------------------------------------------------------- misc

TEST(Determinant, MatchesEliminationOracle) {
  std::mt19937_64 rng(testing::seed() + 8);
  for (int k = 0; k < 60; ++k) {
    RatMatrix a = testing::random_symmetric(rng, 1 + static_cast<std::size_t>(k % 6), 0.3);
    EXPECT_EQ(determinant(a), testing::det_oracle(a));
  }
}

TEST(CharacteristicPolynomial, MatchesInterpolationOracle) {
  std::mt19937_64 rng(testing::seed() + 9);
  for (int k = 0; k < 40; ++k) {
    RatMatrix a = testing::random_symmetric(rng, 1 + static_cast<std::size_t>(k % 6), 0.3);
    EXPECT_EQ(characteristic_polynomial(a).coefficients(), testing::charpoly_oracle(a));
  }
}

TEST(MinimalPolynomial, Annihilates) {
  RatMatrix a = symplectic_unit<Rational>(3) * counterexample();
  Polynomial m = minimal_polynomial(a);
  EXPECT_TRUE(evaluate(m, a).is_zero());
  EXPECT_EQ(m.degree(), 4);
}

TEST(Tolerance, DefaultScalesWithNorm) {
  numeric::Tolerance t;
  numeric::MatrixXd a = numeric::MatrixXd::Identity(2, 2) * 3.0;
  EXPECT_DOUBLE_EQ(t.for_matrix(a), 1e-8 * 4.0);
  t.absolute = 1e-3;
  EXPECT_DOUBLE_EQ(t.for_matrix(a), 1e-3);
}

}  // namespace
}  // namespace relequil
