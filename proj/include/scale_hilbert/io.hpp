#pragma once

// JSON schemas for weights, truncated scale spaces and operators.
//
//   Weight    { "n": int, "kind": "table", "values": [f(1), ..., f(n)] }
//             { "n": int, "kind": "closed_form", "formula": {"name": "poly_plus_one", "degree": d} }
//   Space     { "n": int, "k_max": int, "grades": [ {"type": "diagonal", "weight": Weight}
//                                                 | {"type": "gram", "matrix": [[...], ...]} ] }
//   Operator  { "n": int, "kind": "dense",               "matrix": [[...], ...],
//               "kind": "diagonal",            "diag": [...],
//               "kind": "conjugated_diagonal", "diag": [...], "seed": int,
//               "scale": Space | "graph_default" }
//
// A table weight may give "log_values" instead of "values" for entries beyond the double range.

#include "scale_hilbert/common.hpp"
#include "scale_hilbert/hessian.hpp"
#include "scale_hilbert/random.hpp"
#include "scale_hilbert/spaces.hpp"
#include "scale_hilbert/weights.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <string>
#include <vector>

namespace scale_hilbert {

using json = nlohmann::json;

/// Input that does not follow one of the schemas above.
class schema_error : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

namespace detail {

inline const json& require_field(const json& j, const char* key, const char* context) {
  if (!j.is_object() || !j.contains(key))
    throw schema_error(std::string(context) + ": missing field \"" + key + "\"");
  return j.at(key);
}

inline Index require_positive_int(const json& j, const char* key, const char* context) {
  const json& v = require_field(j, key, context);
  if (!v.is_number_integer() || v.get<long long>() < 1)
    throw schema_error(std::string(context) + ": \"" + key + "\" must be a positive integer");
  return static_cast<Index>(v.get<long long>());
}

inline std::vector<double> number_array(const json& j, const char* context) {
  if (!j.is_array()) throw schema_error(std::string(context) + ": expected an array of numbers");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& x : j) {
    if (!x.is_number()) throw schema_error(std::string(context) + ": expected an array of numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

inline Matrix matrix_from_json(const json& j, Index n, const char* context) {
  if (!j.is_array() || static_cast<Index>(j.size()) != n)
    throw schema_error(std::string(context) + ": matrix must have " + std::to_string(n) + " rows");
  Matrix m(n, n);
  for (Index i = 0; i < n; ++i) {
    const auto row = number_array(j[static_cast<std::size_t>(i)], context);
    if (static_cast<Index>(row.size()) != n)
      throw schema_error(std::string(context) + ": matrix row " + std::to_string(i) + " must have " +
                         std::to_string(n) + " entries");
    for (Index c = 0; c < n; ++c) m(i, c) = row[static_cast<std::size_t>(c)];
  }
  return m;
}

inline json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back(m(i, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

} // namespace detail

inline Weight weight_from_json(const json& j) {
  const Index n = detail::require_positive_int(j, "n", "weight");
  const json& kind = detail::require_field(j, "kind", "weight");
  if (kind == "table") {
    if (j.contains("values")) {
      const auto values = detail::number_array(j.at("values"), "weight values");
      if (static_cast<Index>(values.size()) != n) throw schema_error("weight: \"values\" length differs from n");
      return Weight::from_values(values);
    }
    const auto logs = detail::number_array(detail::require_field(j, "log_values", "weight"), "weight log_values");
    if (static_cast<Index>(logs.size()) != n) throw schema_error("weight: \"log_values\" length differs from n");
    return Weight(logs);
  }
  if (kind == "closed_form") {
    const json& formula = detail::require_field(j, "formula", "weight");
    const json& name = detail::require_field(formula, "name", "weight formula");
    if (name != "poly_plus_one") throw schema_error("weight formula: unknown name " + name.dump());
    const json& degree = detail::require_field(formula, "degree", "weight formula");
    if (!degree.is_number_integer() || degree.get<int>() < 0)
      throw schema_error("weight formula: \"degree\" must be a nonnegative integer");
    return Weight::poly_plus_one(n, degree.get<int>());
  }
  throw schema_error("weight: unknown kind " + kind.dump());
}

/// Table form. Linear values are written when they are all representable, log values always.
inline json weight_to_json(const Weight& w) {
  json j{{"n", w.size()}, {"kind", "table"}};
  const auto logs = w.log_values();
  const bool representable =
      std::all_of(logs.begin(), logs.end(), [](double l) { return l <= max_representable_log; });
  if (representable) {
    json values = json::array();
    for (double l : logs) values.push_back(std::exp(l));
    j["values"] = std::move(values);
  }
  j["log_values"] = logs;
  return j;
}

inline TruncatedScaleSpace space_from_json(const json& j) {
  const Index n = detail::require_positive_int(j, "n", "space");
  const json& grades_json = detail::require_field(j, "grades", "space");
  if (!grades_json.is_array() || grades_json.empty()) throw schema_error("space: \"grades\" must be a nonempty array");
  if (j.contains("k_max")) {
    const json& k_max = j.at("k_max");
    if (!k_max.is_number_integer() || k_max.get<long long>() + 1 != static_cast<long long>(grades_json.size()))
      throw schema_error("space: \"k_max\" must equal the number of grades minus one");
  }
  std::vector<GradeDescriptor> grades;
  for (const auto& g : grades_json) {
    const json& type = detail::require_field(g, "type", "grade");
    if (type == "diagonal") {
      grades.emplace_back(DiagonalGrade{weight_from_json(detail::require_field(g, "weight", "grade"))});
    } else if (type == "gram") {
      grades.emplace_back(GramGrade{detail::matrix_from_json(detail::require_field(g, "matrix", "grade"), n, "gram grade")});
    } else {
      throw schema_error("grade: unknown type " + type.dump());
    }
  }
  return TruncatedScaleSpace(n, std::move(grades));
}

inline json space_to_json(const TruncatedScaleSpace& s) {
  json grades = json::array();
  for (int k = 0; k <= s.k_max(); ++k) {
    if (s.is_diagonal(k)) {
      grades.push_back({{"type", "diagonal"}, {"weight", weight_to_json(std::get<DiagonalGrade>(s.grade(k)).weight)}});
    } else {
      grades.push_back({{"type", "gram"}, {"matrix", detail::matrix_to_json(s.gram(k))}});
    }
  }
  return {{"n", s.dimension()}, {"k_max", s.k_max()}, {"grades", std::move(grades)}};
}

/// Matrix described by an operator document, without its scale.
inline Matrix operator_matrix_from_json(const json& j) {
  const Index n = detail::require_positive_int(j, "n", "operator");
  const json& kind = detail::require_field(j, "kind", "operator");
  if (kind == "dense") return detail::matrix_from_json(detail::require_field(j, "matrix", "operator"), n, "operator matrix");

  const auto diag = detail::number_array(detail::require_field(j, "diag", "operator"), "operator diag");
  if (static_cast<Index>(diag.size()) != n) throw schema_error("operator: \"diag\" length differs from n");
  const Vector d = Eigen::Map<const Vector>(diag.data(), n);
  if (kind == "diagonal") return d.asDiagonal();
  if (kind == "conjugated_diagonal") {
    const json& seed = detail::require_field(j, "seed", "operator");
    if (!seed.is_number_integer() || seed.get<long long>() < 0)
      throw schema_error("operator: \"seed\" must be a nonnegative integer");
    return conjugated_diagonal(d, random_orthogonal(n, seed.get<std::uint64_t>()));
  }
  throw schema_error("operator: unknown kind " + kind.dump());
}

/// Operator with its scale; "graph_default" (or no scale) builds the graph ladder up to graph_k_max.
inline ScaleOperator operator_from_json(const json& j, int graph_k_max = 3) {
  Matrix a = operator_matrix_from_json(j);
  if (!j.contains("scale") || j.at("scale") == "graph_default") return ScaleOperator::with_graph_scale(std::move(a), graph_k_max);
  const json& scale = j.at("scale");
  if (!scale.is_object()) throw schema_error("operator: \"scale\" must be a space object or \"graph_default\"");
  return ScaleOperator(std::move(a), space_from_json(scale));
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw schema_error(path + ": " + e.what());
  }
}

} // namespace scale_hilbert
