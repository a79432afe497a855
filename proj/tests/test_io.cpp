#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "mlab/io.hpp"

using namespace mlab;

namespace {

Vector vec(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

BodySpec sample_body(Family family) {
  Matrix A(2, 2);
  A << 2.0, 0.3, 0.3, 1.0;
  switch (family) {
    case Family::ellipsoid: return BodySpec::ellipsoid(A);
    case Family::randers: return BodySpec::randers(A, vec(0.3, -0.2));
    case Family::quartic: return BodySpec::quartic(A, vec(0.5, 1.0), 0.3);
    case Family::translated:
      return BodySpec::translated(BodySpec::quartic(A, vec(0.5, 1.0), 0.3), vec(0.2, 0.1));
  }
  throw std::logic_error("unreachable");
}

}  // namespace

TEST_CASE("vectors and matrices round-trip through JSON") {
  const Vector v = vec(1.5, -2.25);
  CHECK((vector_from_json(vector_to_json(v)) - v).cwiseAbs().maxCoeff() == 0.0);
  Matrix M(2, 3);
  M << 1, 2, 3, 4, 5, 0.0625;
  CHECK((matrix_from_json(matrix_to_json(M)) - M).cwiseAbs().maxCoeff() == 0.0);

  CHECK_THROWS_AS(vector_from_json(json::parse("\"zip\"")), InvalidSpec);
  CHECK_THROWS_AS(matrix_from_json(json::parse("[[1,2],[3]]")), InvalidSpec);
}

TEST_CASE("body descriptions round-trip through JSON for every family") {
  for (Family family :
       {Family::ellipsoid, Family::randers, Family::quartic, Family::translated}) {
    const BodySpec original = sample_body(family);
    const BodySpec restored = body_spec_from_json(body_spec_to_json(original));
    CHECK(restored.family() == original.family());
    CHECK(restored.dimension() == original.dimension());
    for (const Vector& v : {vec(0.7, -0.4), vec(-0.3, 1.1)}) {
      CHECK(evaluate_gauge(restored, v) == evaluate_gauge(original, v));
    }
  }
}

TEST_CASE("malformed body documents are rejected with InvalidSpec") {
  CHECK_THROWS_AS(body_spec_from_json(json::parse("{}")), InvalidSpec);
  CHECK_THROWS_AS(body_spec_from_json(json::parse(R"({"dimension": 2.5,
      "family": "ellipsoid", "params": {"A": [[1,0],[0,1]]}})")),
                  InvalidSpec);
  CHECK_THROWS_AS(body_spec_from_json(json::parse(R"({"dimension": 2,
      "family": "banana", "params": {}})")),
                  InvalidSpec);
  CHECK_THROWS_AS(body_spec_from_json(json::parse(R"({"dimension": 2,
      "family": "randers", "params": {"A": [[1,0],[0,1]]}})")),
                  InvalidSpec);  // missing b
  CHECK_THROWS_AS(body_spec_from_json(json::parse(R"({"dimension": 3,
      "family": "ellipsoid", "params": {"A": [[1,0],[0,1]]}})")),
                  InvalidSpec);  // dimension mismatch
}

TEST_CASE("files load, fail loudly, and format with full precision") {
  const auto dir = std::filesystem::temp_directory_path() / "mlab_io_test";
  std::filesystem::create_directories(dir);
  const std::string good = (dir / "good.json").string();
  write_text_file(good, body_spec_to_json(sample_body(Family::randers)).dump(2));
  const BodySpec spec = load_body_spec(good);
  CHECK(spec.family() == Family::randers);

  CHECK_THROWS_AS(load_body_spec((dir / "missing.json").string()), IoFailure);

  const std::string bad = (dir / "bad.json").string();
  write_text_file(bad, "{ not json");
  CHECK_THROWS_AS(load_body_spec(bad), InvalidSpec);

  CHECK_THROWS_AS(write_text_file((dir / "no" / "such" / "dir.txt").string(), "x"), IoFailure);

  // shortest round-trip decimal representation
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(std::stod(format_double(2.0 / 3.0)) == 2.0 / 3.0);
  std::filesystem::remove_all(dir);
}

TEST_CASE("report serialization carries the full data block") {
  const SphereRule rule = build_rule(2, RuleKind::trapezoid2d, 64);
  const AveragedReport rep = averaged_report(sample_body(Family::randers), rule);
  const json j = averaged_report_to_json(rep);
  CHECK(j["area"].get<double>() == rep.area);
  CHECK(j["balanced"].get<bool>() == rep.balanced);
  CHECK(j["beta"].is_array());
  CHECK(j["Gamma1"].is_array());
  CHECK(j["rule"].get<std::string>() == "trapezoid2d");
  CHECK(j["nodes"].get<int>() == 64);
  CHECK(!j.contains("standard_errors"));  // deterministic rule

  const SphereRule mc = build_rule(2, RuleKind::montecarlo, 64, 3);
  const json jm = averaged_report_to_json(averaged_report(sample_body(Family::randers), mc));
  CHECK(jm.contains("standard_errors"));

  BrickellReport br;
  br.q_norm = 0.5;
  br.verdict = "not applicable";
  const json jb = brickell_report_to_json(br);
  CHECK(jb["q_norm"].get<double>() == 0.5);
  CHECK(jb["verdict"].get<std::string>() == "not applicable");
}
