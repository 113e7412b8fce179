#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "relequil/matrix.hpp"

namespace relequil {

/// One distinct eigenvalue with its algebraic multiplicity.
struct Eigenvalue {
  std::complex<double> value;
  int multiplicity = 1;
  /// A true eigenvalue lies within this distance of `value` (0 when exact).
  double radius = 0.0;
  /// Exact backend: decided exactly. Float backend: |Im| within tolerance.
  bool real = false;
  /// `value` equals the eigenvalue exactly (a rational real eigenvalue).
  bool exact = false;
};

/// Sorted by real part, then imaginary part.
using Spectrum = std::vector<Eigenvalue>;

int total_multiplicity(const Spectrum& s);

/// Outcome of a semisimplicity test.
struct SemisimpleReport {
  Tri semisimple = Tri::indeterminate;
  /// Set when semisimple == no: an eigenvalue whose Jordan structure is defective.
  std::optional<std::complex<double>> defective_eigenvalue;
  /// Exact backend: minimal polynomial and gcd(m, m'). Float backend: rank pair.
  std::string certificate;
  /// Tolerance used by the float backend; 0 for the exact backend.
  double tolerance = 0.0;
};

}  // namespace relequil
