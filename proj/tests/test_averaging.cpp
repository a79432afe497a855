#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "mlab/averaging.hpp"
#include "mlab/numerics.hpp"

using namespace mlab;

namespace {

const double kPi = std::numbers::pi;

Vector vec(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

BodySpec ball(int n) { return BodySpec::ellipsoid(Matrix::Identity(n, n)); }

BodySpec randers_axis() { return BodySpec::randers(Matrix::Identity(2, 2), vec(0.3, 0.0)); }

BodySpec quartic2() {
  Matrix A(2, 2);
  A << 2.0, 0.3, 0.3, 1.0;
  Vector c(2);
  c << 0.5, 1.0;
  return BodySpec::quartic(A, c, 0.3);
}

SphereRule circle(int n) { return build_rule(2, RuleKind::trapezoid2d, n); }

Matrix rotation(double t) {
  Matrix R(2, 2);
  R << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
  return R;
}

}  // namespace

TEST_CASE("Euclidean ball averages are the round-sphere moments") {
  const AveragedReport rep = averaged_report(ball(2), circle(256));
  CHECK(std::abs(rep.area - 2 * kPi) <= 1e-10);
  CHECK((rep.Gamma1 - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() <= 1e-10);
  CHECK((rep.Gamma3 - 0.5 * Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() <= 1e-10);
  CHECK(rep.beta.cwiseAbs().maxCoeff() <= 1e-10);
  CHECK(rep.balanced);
  CHECK(rep.beta_sup_norm_G1 <= 1e-10);
  CHECK(rep.beta_sup_norm_G3 <= 1e-10);
  CHECK(rep.rule_kind == RuleKind::trapezoid2d);
  CHECK(rep.node_count == 256);
  CHECK(!rep.standard_errors.has_value());

  const auto [lambda, residual] = lambda_estimate(rep);
  CHECK(lambda == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(residual <= 1e-10);
}

TEST_CASE("ellipsoid averages follow the constant-metric closed forms") {
  // the indicatrix of sqrt(v^T A v) is isometric to the round sphere, so
  // area = |S^{n-1}|, Gamma1 = A, Gamma3 = A/n, lambda = (n-1)/n
  Matrix A2(2, 2);
  A2 << 2.0, 0.3, 0.3, 1.0;
  const AveragedReport r2 = averaged_report(BodySpec::ellipsoid(A2), circle(512));
  CHECK(std::abs(r2.area - 2 * kPi) <= 1e-10);
  CHECK((r2.Gamma1 - A2).cwiseAbs().maxCoeff() <= 1e-10);
  CHECK((r2.Gamma3 - A2 / 2).cwiseAbs().maxCoeff() <= 1e-10);
  CHECK(r2.balanced);

  Matrix A3(3, 3);
  A3 << 2.0, 0.3, -0.1, 0.3, 1.5, 0.2, -0.1, 0.2, 1.0;
  const SphereRule rule3 = build_rule(3, RuleKind::gauss_product3d, 2048);
  const AveragedReport r3 = averaged_report(BodySpec::ellipsoid(A3), rule3);
  CHECK(std::abs(r3.area - 4 * kPi) <= 1e-8);
  CHECK((r3.Gamma1 - A3).cwiseAbs().maxCoeff() <= 1e-8);
  CHECK((r3.Gamma3 - A3 / 3).cwiseAbs().maxCoeff() <= 1e-8);
  const auto [lambda, residual] = lambda_estimate(r3);
  CHECK(lambda == doctest::Approx(2.0 / 3.0).epsilon(1e-10));
  CHECK(residual <= 1e-10);
}

TEST_CASE("the three averaged matrices satisfy gamma2 = gamma1 - gamma3") {
  for (const BodySpec& spec : {ball(2), randers_axis(), quartic2()}) {
    const AveragedReport rep = averaged_report(spec, circle(512));
    const double scale = rep.gamma1.cwiseAbs().maxCoeff();
    CHECK((rep.gamma2 - (rep.gamma1 - rep.gamma3)).cwiseAbs().maxCoeff() <= 1e-10 * scale);
    CHECK((rep.gamma1 - rep.gamma1.transpose()).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("an axis-aligned Randers body is unbalanced along its one-form") {
  const AveragedReport rep = averaged_report(randers_axis(), circle(512));
  CHECK(!rep.balanced);
  CHECK(rep.beta[0] > 0.1);  // beta aligns with b
  CHECK(std::abs(rep.beta[1]) <= 1e-10);
  // frozen regression values (trapezoid, 512 nodes)
  CHECK(rep.area == doctest::Approx(6.394779439685).epsilon(1e-9));
  CHECK(rep.beta[0] == doctest::Approx(1.426055547756).epsilon(1e-9));
  CHECK(rep.Gamma3(0, 0) == doctest::Approx(0.548239438668).epsilon(1e-9));
  CHECK(rep.beta_sup_norm_G1 > 0.0);

  // Cauchy-Schwarz on the indicatrix: (beta(v)/area)^2 < Gamma3(v, v)
  GaussianSampler rng(3);
  for (int k = 0; k < 100; ++k) {
    const Vector v = rng.normal_vector(2);
    const double lhs = rep.beta.dot(v) / rep.area;
    CHECK(lhs * lhs < v.dot(rep.Gamma3 * v));
  }
}

TEST_CASE("reports are converged: doubling the rule changes nothing") {
  for (const BodySpec& spec : {randers_axis(), quartic2()}) {
    const AveragedReport a = averaged_report(spec, circle(256));
    const AveragedReport b = averaged_report(spec, circle(512));
    CHECK(std::abs(a.area - b.area) <= 1e-9 * b.area);
    CHECK((a.gamma1 - b.gamma1).cwiseAbs().maxCoeff() <=
          1e-9 * b.gamma1.cwiseAbs().maxCoeff());
    CHECK((a.gamma3 - b.gamma3).cwiseAbs().maxCoeff() <=
          1e-9 * b.gamma3.cwiseAbs().maxCoeff());
    CHECK((a.beta - b.beta).cwiseAbs().maxCoeff() <= 1e-9 * (1.0 + b.beta.cwiseAbs().maxCoeff()));
  }
}

TEST_CASE("the averaged Cartan trace identity holds") {
  // v^i int L C_i dmu = (n - 1) beta(v)
  const SphereRule rule = circle(512);
  for (const BodySpec& spec : {ball(2), randers_axis(), quartic2()}) {
    for (const Vector& v : {vec(1.0, 0.0), vec(0.3, -0.8), vec(-0.6, 0.45)}) {
      CHECK(remark1_identity_residual(spec, v, rule) <= 1e-8);
    }
  }
}

TEST_CASE("averaged Randers functionals evaluate and convert consistently") {
  const AveragedReport rep = averaged_report(randers_axis(), circle(512));
  for (RandersWhich which : {RandersWhich::F1, RandersWhich::F3}) {
    const RandersFunctional fn = make_randers(rep, which);
    const BodySpec spec = fn.to_body_spec();
    CHECK(spec.family() == Family::randers);
    for (const Vector& v : {vec(0.7, -0.4), vec(-0.3, 1.1)}) {
      const double direct = std::sqrt(v.dot(fn.base_metric * v)) + fn.one_form.dot(v);
      CHECK(fn(v) == doctest::Approx(direct).epsilon(1e-14));
      CHECK(evaluate_gauge(spec, v) == doctest::Approx(direct).epsilon(1e-14));
    }
  }
  // the ball's averages produce the ball back (zero one-form)
  const RandersFunctional ballfn = make_randers(averaged_report(ball(2), circle(256)),
                                                RandersWhich::F1);
  CHECK(ballfn.one_form.cwiseAbs().maxCoeff() <= 1e-12);

  // a fabricated report whose one-form is too long must be rejected
  AveragedReport bogus = rep;
  bogus.beta = vec(2.0 * rep.area, 0.0);  // unit-ball norm ~2 in Gamma1 ~ I-ish
  bogus.beta_sup_norm_G1 =
      std::sqrt(bogus.beta.dot(bogus.Gamma1.inverse() * bogus.beta)) / bogus.area;
  CHECK_THROWS_AS(make_randers(bogus, RandersWhich::F1), NotAFinslerNorm);
}

TEST_CASE("linear isometries leave every average invariant") {
  const SphereRule rule = circle(512);
  CHECK(isometry_invariance_check(ball(2), rotation(0.7), rule) <= 1e-12);

  // conjugated rotations preserve a general ellipsoid gauge
  Matrix A = Matrix::Identity(2, 2);
  A(0, 0) = 4.0;
  const Matrix Ahalf = A.cwiseSqrt();  // diagonal, so the square root is entrywise
  const Matrix Phi = Ahalf.inverse() * rotation(1.1) * Ahalf;
  CHECK(isometry_invariance_check(BodySpec::ellipsoid(A), Phi, rule) <= 1e-10);

  // the vertical reflection preserves the axis-aligned Randers gauge
  Matrix reflect = Matrix::Identity(2, 2);
  reflect(1, 1) = -1.0;
  CHECK(isometry_invariance_check(randers_axis(), reflect, rule) <= 1e-10);

  // maps that change the gauge are rejected at the spot check
  CHECK_THROWS_AS(isometry_invariance_check(ball(2), 1.1 * Matrix::Identity(2, 2), rule),
                  NotAnIsometry);
  CHECK_THROWS_AS(isometry_invariance_check(randers_axis(), rotation(0.5), rule), NotAnIsometry);
}

TEST_CASE("stochastic rules carry standard errors that cover the truth") {
  Matrix A = Matrix::Identity(2, 2);
  A(0, 0) = 4.0;
  const SphereRule mc = build_rule(2, RuleKind::montecarlo, 4096, 13);
  const AveragedReport rep = averaged_report(BodySpec::ellipsoid(A), mc);
  REQUIRE(rep.standard_errors.has_value());
  CHECK(rep.standard_errors->area > 0.0);
  CHECK(std::abs(rep.area - 2 * kPi) <= 10.0 * rep.standard_errors->area);
  CHECK((rep.Gamma1 - A).cwiseAbs().maxCoeff() <= 0.2);
  CHECK(rep.standard_errors->gamma1(0, 0) > 0.0);
  CHECK(rep.standard_errors->beta.size() == 2);
}

TEST_CASE("lambda fit reports a meaningful residual off the symmetric case") {
  const auto [lambda, residual] = lambda_estimate(averaged_report(quartic2(), circle(512)));
  CHECK(std::isfinite(lambda));
  CHECK(lambda > 0.0);
  CHECK(lambda < 1.0);
  CHECK(residual >= 0.0);
}
