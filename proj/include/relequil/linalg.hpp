#pragma once

// Exact dense linear algebra over the rationals.

#include <cstddef>
#include <optional>
#include <vector>

#include "relequil/matrix.hpp"
#include "relequil/polynomial.hpp"
#include "relequil/spectrum.hpp"

namespace relequil {

struct RowEchelon {
  RatMatrix reduced;                 // reduced row echelon form
  std::vector<std::size_t> pivots;   // pivot column of each nonzero row
};

RowEchelon row_reduce(const RatMatrix& a);
std::size_t rank(const RatMatrix& a);

/// Null space basis, one vector per free column of the reduced echelon form.
RatSubspace kernel(const RatMatrix& a);

/// A basis of the span of the columns (pivot columns of `a`).
RatSubspace column_space(const RatMatrix& a);

/// Euclidean orthogonal complement of span(basis) in its ambient space.
RatSubspace orthogonal_complement(const RatSubspace& w);

bool is_subspace_of(const RatSubspace& inner, const RatSubspace& outer);
/// A * span(W) ⊆ span(W).
bool is_invariant(const RatSubspace& w, const RatMatrix& a);

/// Fraction-free (Bareiss) determinant after clearing denominators.
Rational determinant(const RatMatrix& a);
std::optional<RatMatrix> inverse(const RatMatrix& a);
/// Some solution of a x = b, if the system is consistent.
std::optional<RatVector> solve(const RatMatrix& a, const RatVector& b);

/// det(x I - A) via the Faddeev–LeVerrier recursion.
Polynomial characteristic_polynomial(const RatMatrix& a);
/// Monic generator of the annihilating ideal of A.
Polynomial minimal_polynomial(const RatMatrix& a);
/// Evaluates p(A) by Horner's rule.
RatMatrix evaluate(const Polynomial& p, const RatMatrix& a);

/// Symmetric indefinite factorization P B P^T = L D L^T with 1x1 and 2x2
/// diagonal blocks (2x2 only when every remaining diagonal entry vanishes).
struct LdltFactorization {
  std::vector<std::size_t> permutation;   // row i of P B P^T is row permutation[i] of B
  RatMatrix lower;                        // unit lower triangular
  RatMatrix block_diagonal;
  std::vector<int> block_sizes;
};

LdltFactorization ldlt(const RatMatrix& b);

/// Exact Morse index / nullity / coindex by congruence.
/// Throws ShapeError for non-square input, std::invalid_argument if B is not symmetric.
IndexReport inertia(const RatMatrix& b);

/// Eigenvalues with algebraic multiplicities, from the square-free
/// factorization of the characteristic polynomial. Real roots come with
/// rational isolating intervals (radius is half the interval width), complex
/// roots with an inclusion disc of radius deg * |f(z) / f'(z)|.
Spectrum complex_spectrum(const RatMatrix& a);

/// Semisimple iff gcd(m, m') = 1 for the minimal polynomial m.
SemisimpleReport is_semisimple(const RatMatrix& a);

/// Invertible Q with Q J Q^T = omega, by skew Gram–Schmidt.
/// Throws ShapeError (odd or non-square), std::invalid_argument (not skew),
/// std::domain_error (singular).
RatMatrix symplectic_reduction(const RatMatrix& omega);

/// Gram matrix W^T B W of the form B on the basis of W.
RatMatrix restrict_form(const RatMatrix& b, const RatSubspace& w);

/// Infinity norm (maximum absolute row sum) as a double.
double norm_inf(const RatMatrix& a);

}  // namespace relequil
