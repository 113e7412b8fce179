#pragma once

// JSON file formats and the byte-stable report writer.

#include <nlohmann/json.hpp>

#include <optional>
#include <stdexcept>
#include <string>

#include "relequil/matrix.hpp"
#include "relequil/nbody.hpp"
#include "relequil/numeric.hpp"

namespace relequil::io {

using Json = nlohmann::json;

/// Malformed input; the CLI maps it to exit code 1.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A matrix as read from disk. `exact` is set for field "rational".
struct MatrixData {
  numeric::MatrixXd values;
  std::optional<RatMatrix> exact;
};

MatrixData parse_matrix(const Json& j);
Json matrix_to_json(const RatMatrix& a);
Json matrix_to_json(const numeric::MatrixXd& a);

RatSubspace parse_subspace(const Json& j);
Json subspace_to_json(const RatSubspace& w);

struct PathSpec {
  enum class Kind { krein, linear } kind = Kind::linear;
  MatrixData b;
  std::optional<Rational> s_max;
  MatrixData a0;
  MatrixData a1;
};

PathSpec parse_path(const Json& j);

struct Problem {
  nbody::NBodySystem system;
  nbody::Settings settings;
};

Problem parse_problem(const Json& j);

/// Reads and parses a JSON file; InputError on I/O or syntax errors.
Json load_json(const std::string& path);

/// Sorted keys, two-space indentation, doubles as %.17g, trailing newline.
std::string dump_stable(const Json& j);

/// Finite doubles map to numbers; NaN and infinities to strings.
Json number(double v);

}  // namespace relequil::io
