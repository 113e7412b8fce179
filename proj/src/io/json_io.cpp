#include "relequil/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace relequil::io {

namespace {

const Json& require(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw InputError(std::string("missing key \"") + key + "\"");
  return j.at(key);
}

Rational rational_entry(const Json& v) {
  if (v.is_string()) {
    try {
      return parse_rational(v.get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw InputError(e.what());
    }
  }
  if (v.is_number_integer()) return Rational(Integer(v.dump()));
  throw InputError("rational entries must be strings \"p/q\" or integers, got " + v.dump());
}

Rational rational_entry_or_number(const Json& v) {
  if (v.is_number_float()) return from_double(v.get<double>());
  return rational_entry(v);
}

double float_entry(const Json& v) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    try {
      return to_double(parse_rational(v.get<std::string>()));
    } catch (const std::invalid_argument& e) {
      throw InputError(e.what());
    }
  }
  throw InputError("float64 entries must be numbers, got " + v.dump());
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

bool is_scalar_array(const Json& j) {
  if (!j.is_array()) return false;
  for (const auto& e : j)
    if (e.is_structured()) return false;
  return true;
}

void write(std::ostringstream& os, const Json& j, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {  // std::map keeps keys sorted
        if (!first) os << ",\n";
        first = false;
        os << inner << Json(it.key()).dump() << ": ";
        write(os, it.value(), indent + 1);
      }
      os << "\n" << pad << "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      if (is_scalar_array(j)) {
        os << "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) os << ", ";
          write(os, j[i], indent + 1);
        }
        os << "]";
        return;
      }
      os << "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) os << ",\n";
        os << inner;
        write(os, j[i], indent + 1);
      }
      os << "\n" << pad << "]";
      return;
    }
    case Json::value_t::number_float:
      os << format_double(j.get<double>());
      return;
    default:
      os << j.dump();
  }
}

}  // namespace

MatrixData parse_matrix(const Json& j) {
  const std::size_t rows = require(j, "rows").get<std::size_t>();
  const std::size_t cols = require(j, "cols").get<std::size_t>();
  const std::string field = require(j, "field").get<std::string>();
  const Json& data = require(j, "data");
  if (rows == 0 || cols == 0) throw InputError("matrix dimensions must be positive");
  if (field != "rational" && field != "float64") throw InputError("field must be \"rational\" or \"float64\"");
  if (!data.is_array() || data.size() != rows) throw InputError("data must hold " + std::to_string(rows) + " rows");
  MatrixData out;
  out.values.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  RatMatrix exact(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (!data[i].is_array() || data[i].size() != cols)
      throw InputError("row " + std::to_string(i) + " must hold " + std::to_string(cols) + " entries");
    for (std::size_t k = 0; k < cols; ++k) {
      const auto r = static_cast<Eigen::Index>(i), c = static_cast<Eigen::Index>(k);
      if (field == "rational") {
        exact(i, k) = rational_entry(data[i][k]);
        out.values(r, c) = to_double(exact(i, k));
      } else {
        out.values(r, c) = float_entry(data[i][k]);
      }
    }
  }
  if (field == "rational") out.exact = std::move(exact);
  return out;
}

Json matrix_to_json(const RatMatrix& a) {
  Json data = Json::array();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t k = 0; k < a.cols(); ++k) row.push_back(to_string(a(i, k)));
    data.push_back(row);
  }
  return Json{{"rows", a.rows()}, {"cols", a.cols()}, {"field", "rational"}, {"data", data}};
}

Json matrix_to_json(const numeric::MatrixXd& a) {
  Json data = Json::array();
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index k = 0; k < a.cols(); ++k) row.push_back(number(a(i, k)));
    data.push_back(row);
  }
  return Json{{"rows", a.rows()}, {"cols", a.cols()}, {"field", "float64"}, {"data", data}};
}

RatSubspace parse_subspace(const Json& j) {
  const std::size_t ambient = require(j, "ambient").get<std::size_t>();
  const Json& basis = require(j, "basis");
  if (!basis.is_array()) throw InputError("basis must be an array of column vectors");
  RatSubspace w{ambient, RatMatrix(ambient, basis.size())};
  for (std::size_t c = 0; c < basis.size(); ++c) {
    if (!basis[c].is_array() || basis[c].size() != ambient)
      throw InputError("basis vector " + std::to_string(c) + " must have length " + std::to_string(ambient));
    for (std::size_t i = 0; i < ambient; ++i) w.basis(i, c) = rational_entry(basis[c][i]);
  }
  if (w.dim() > 0 && rank(w.basis) != w.dim()) throw InputError("basis vectors are linearly dependent");
  return w;
}

Json subspace_to_json(const RatSubspace& w) {
  Json basis = Json::array();
  for (std::size_t c = 0; c < w.dim(); ++c) {
    Json v = Json::array();
    for (std::size_t i = 0; i < w.ambient; ++i) v.push_back(to_string(w.basis(i, c)));
    basis.push_back(v);
  }
  return Json{{"ambient", w.ambient}, {"basis", basis}};
}

PathSpec parse_path(const Json& j) {
  const std::string type = require(j, "type").get<std::string>();
  PathSpec spec;
  if (type == "krein") {
    spec.kind = PathSpec::Kind::krein;
    spec.b = parse_matrix(require(j, "B"));
    if (j.contains("s_max")) spec.s_max = rational_entry_or_number(j.at("s_max"));
  } else if (type == "linear") {
    spec.a0 = parse_matrix(require(j, "A0"));
    spec.a1 = parse_matrix(require(j, "A1"));
  } else {
    throw InputError("path type must be \"krein\" or \"linear\"");
  }
  return spec;
}

Problem parse_problem(const Json& j) {
  Problem p;
  const Json& masses = require(j, "masses");
  const Json& positions = require(j, "positions");
  if (!masses.is_array() || !positions.is_array() || masses.size() != positions.size())
    throw InputError("masses and positions must be arrays of equal length");
  for (const auto& m : masses) p.system.masses.push_back(float_entry(m));
  p.system.alpha = float_entry(require(j, "alpha"));
  p.system.positions.resize(2 * static_cast<Eigen::Index>(positions.size()));
  for (std::size_t i = 0; i < positions.size(); ++i) {
    if (!positions[i].is_array() || positions[i].size() != 2)
      throw InputError("position " + std::to_string(i) + " must be [x, y]");
    p.system.positions(2 * static_cast<Eigen::Index>(i)) = float_entry(positions[i][0]);
    p.system.positions(2 * static_cast<Eigen::Index>(i) + 1) = float_entry(positions[i][1]);
  }
  if (j.contains("settings")) {
    const Json& s = j.at("settings");
    if (s.contains("cc_tol")) p.settings.cc_tol = float_entry(s.at("cc_tol"));
    if (s.contains("max_iter")) p.settings.max_iter = s.at("max_iter").get<int>();
    if (s.contains("collision_guard")) p.settings.collision_guard = float_entry(s.at("collision_guard"));
  }
  try {
    p.system.validate();
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
  return p;
}

Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw InputError(path + ": " + e.what());
  }
}

std::string dump_stable(const Json& j) {
  std::ostringstream os;
  write(os, j, 0);
  os << "\n";
  return os.str();
}

Json number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

}  // namespace relequil::io
