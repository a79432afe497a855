#include "mlab/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace mlab {

json vector_to_json(const Vector& v) {
  json a = json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Vector vector_from_json(const json& j) {
  if (!j.is_array()) throw InvalidSpec("expected an array of numbers");
  Vector v(j.size());
  for (size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw InvalidSpec("expected an array of numbers");
    v[static_cast<int>(i)] = j[i].get<double>();
  }
  return v;
}

Matrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw InvalidSpec("expected a nested array (matrix)");
  const size_t rows = j.size();
  const size_t cols = j[0].is_array() ? j[0].size() : 0;
  if (cols == 0) throw InvalidSpec("expected a nested array (matrix)");
  Matrix m(rows, cols);
  for (size_t i = 0; i < rows; ++i) {
    if (!j[i].is_array() || j[i].size() != cols)
      throw InvalidSpec("matrix rows have inconsistent lengths");
    for (size_t k = 0; k < cols; ++k) {
      if (!j[i][k].is_number()) throw InvalidSpec("matrix entries must be numbers");
      m(static_cast<int>(i), static_cast<int>(k)) = j[i][k].get<double>();
    }
  }
  return m;
}

BodySpec body_spec_from_json(const json& j) {
  if (!j.is_object()) throw InvalidSpec("body description must be a JSON object");
  if (!j.contains("dimension") || !j["dimension"].is_number_integer())
    throw InvalidSpec("missing integer field \"dimension\"");
  if (!j.contains("family") || !j["family"].is_string())
    throw InvalidSpec("missing string field \"family\"");
  if (!j.contains("params") || !j["params"].is_object())
    throw InvalidSpec("missing object field \"params\"");

  const int n = j["dimension"].get<int>();
  const std::string family = j["family"].get<std::string>();
  const json& p = j["params"];
  const auto need = [&](const char* key) -> const json& {
    if (!p.contains(key))
      throw InvalidSpec(std::string("family \"") + family + "\" needs params." + key);
    return p[key];
  };

  BodySpec spec = [&] {
    if (family == "ellipsoid") return BodySpec::ellipsoid(matrix_from_json(need("A")));
    if (family == "randers")
      return BodySpec::randers(matrix_from_json(need("A")), vector_from_json(need("b")));
    if (family == "quartic") {
      const json& eps = need("epsilon");
      if (!eps.is_number()) throw InvalidSpec("params.epsilon must be a number");
      return BodySpec::quartic(matrix_from_json(need("A")), vector_from_json(need("c")),
                               eps.get<double>());
    }
    if (family == "translated")
      return BodySpec::translated(body_spec_from_json(need("inner")),
                                  vector_from_json(need("shift")));
    throw InvalidSpec("unknown family \"" + family + "\"");
  }();
  if (spec.dimension() != n)
    throw InvalidSpec("declared dimension does not match the parameter shapes");
  return spec;
}

json body_spec_to_json(const BodySpec& spec) {
  json j;
  j["dimension"] = spec.dimension();
  j["family"] = family_name(spec.family());
  json p;
  switch (spec.family()) {
    case Family::ellipsoid:
      p["A"] = matrix_to_json(spec.matrix());
      break;
    case Family::randers:
      p["A"] = matrix_to_json(spec.matrix());
      p["b"] = vector_to_json(spec.linear_form());
      break;
    case Family::quartic:
      p["A"] = matrix_to_json(spec.matrix());
      p["c"] = vector_to_json(spec.quartic_coefficients());
      p["epsilon"] = spec.quartic_epsilon();
      break;
    case Family::translated:
      p["inner"] = body_spec_to_json(spec.inner());
      p["shift"] = vector_to_json(spec.shift());
      break;
  }
  j["params"] = std::move(p);
  return j;
}

BodySpec load_body_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoFailure("cannot open body description file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw InvalidSpec(std::string("body description is not valid JSON: ") + e.what());
  }
  return body_spec_from_json(j);
}

json averaged_report_to_json(const AveragedReport& report) {
  json j;
  j["area"] = report.area;
  j["gamma1"] = matrix_to_json(report.gamma1);
  j["gamma2"] = matrix_to_json(report.gamma2);
  j["gamma3"] = matrix_to_json(report.gamma3);
  j["beta"] = vector_to_json(report.beta);
  j["Gamma1"] = matrix_to_json(report.Gamma1);
  j["Gamma2"] = matrix_to_json(report.Gamma2);
  j["Gamma3"] = matrix_to_json(report.Gamma3);
  j["balanced"] = report.balanced;
  j["beta_sup_norm_Gamma1"] = report.beta_sup_norm_G1;
  j["beta_sup_norm_Gamma3"] = report.beta_sup_norm_G3;
  j["rule"] = rule_kind_name(report.rule_kind);
  j["nodes"] = report.node_count;
  if (report.standard_errors) {
    json se;
    se["area"] = report.standard_errors->area;
    se["gamma1"] = matrix_to_json(report.standard_errors->gamma1);
    se["gamma3"] = matrix_to_json(report.standard_errors->gamma3);
    se["beta"] = vector_to_json(report.standard_errors->beta);
    j["standard_errors"] = std::move(se);
  }
  return j;
}

json brickell_report_to_json(const BrickellReport& report) {
  json j;
  j["q_norm"] = report.q_norm;
  j["balanced"] = report.balanced;
  j["ellipsoid_residual"] = report.ellipsoid_residual;
  j["q_tolerance"] = report.q_tolerance;
  j["residual_tolerance"] = report.residual_tolerance;
  j["verdict"] = report.verdict;
  if (!report.warning.empty()) j["warning"] = report.warning;
  return j;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoFailure("cannot open output file: " + path);
  out << content;
  if (!out) throw IoFailure("failed while writing output file: " + path);
}

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace mlab
