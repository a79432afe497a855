#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "mlab/finite_diff.hpp"
#include "mlab/numerics.hpp"

using namespace mlab;

namespace {
double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }
}  // namespace

TEST_CASE("pairwise_sum handles empty, exact, and long inputs") {
  CHECK(pairwise_sum({}) == 0.0);

  std::vector<double> ints(1000);
  for (int i = 0; i < 1000; ++i) ints[i] = i + 1;
  CHECK(pairwise_sum(ints) == 500500.0);

  std::vector<double> tenths(100000, 0.1);
  CHECK(pairwise_sum(tenths) == doctest::Approx(10000.0).epsilon(1e-12));
}

TEST_CASE("gauss_legendre integrates polynomials exactly and smooth functions fast") {
  std::vector<double> x, w;

  gauss_legendre(1, x, w);
  REQUIRE(x.size() == 1);
  CHECK(std::abs(x[0]) <= 1e-15);
  CHECK(w[0] == doctest::Approx(2.0).epsilon(1e-15));

  gauss_legendre(5, x, w);
  double total = 0.0, moment8 = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    total += w[i];
    moment8 += w[i] * std::pow(x[i], 8);
  }
  CHECK(total == doctest::Approx(2.0).epsilon(1e-14));
  // degree-9 exactness of the 5-point rule
  CHECK(moment8 == doctest::Approx(2.0 / 9.0).epsilon(1e-13));

  gauss_legendre(64, x, w);
  double expx = 0.0;
  for (size_t i = 0; i < x.size(); ++i) expx += w[i] * std::exp(x[i]);
  CHECK(expx == doctest::Approx(std::exp(1.0) - std::exp(-1.0)).epsilon(1e-14));
}

TEST_CASE("halton radical inverse matches hand-computed digits") {
  CHECK(halton(1, 2) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(halton(2, 2) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(halton(3, 2) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(halton(1, 3) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(halton(2, 3) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(halton(4, 3) == doctest::Approx(4.0 / 9.0).epsilon(1e-15));
}

TEST_CASE("halton_sphere_point lands on the sphere and spreads out") {
  for (int n = 2; n <= 5; ++n) {
    Vector mean = Vector::Zero(n);
    for (std::uint64_t i = 1; i <= 512; ++i) {
      const Vector u = halton_sphere_point(i, n);
      REQUIRE(u.size() == n);
      CHECK(std::abs(u.norm() - 1.0) <= 1e-12);
      mean += u / 512.0;
    }
    // an equidistributed set has a small barycenter
    CHECK(mean.norm() < 0.2);
    // determinism
    CHECK((halton_sphere_point(7, n) - halton_sphere_point(7, n)).norm() == 0.0);
  }
}

TEST_CASE("inverse_normal_cdf inverts the normal CDF") {
  CHECK(std::abs(inverse_normal_cdf(0.5)) <= 1e-15);
  for (double p : {0.001, 0.01, 0.1, 0.3, 0.5, 0.7, 0.9, 0.975, 0.999}) {
    CHECK(normal_cdf(inverse_normal_cdf(p)) == doctest::Approx(p).epsilon(1e-12));
    CHECK(inverse_normal_cdf(1.0 - p) == doctest::Approx(-inverse_normal_cdf(p)).epsilon(1e-10));
  }
}

TEST_CASE("GaussianSampler is deterministic and statistically sane") {
  GaussianSampler a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.normal() == b.normal());
  CHECK((a.direction(3) - b.direction(3)).norm() == 0.0);

  GaussianSampler s(7);
  double mean = 0.0, var = 0.0;
  const int reps = 20000;
  std::vector<double> draws(reps);
  for (int i = 0; i < reps; ++i) draws[i] = s.normal();
  for (double d : draws) mean += d / reps;
  for (double d : draws) var += (d - mean) * (d - mean) / (reps - 1);
  CHECK(std::abs(mean) < 0.03);
  CHECK(std::abs(var - 1.0) < 0.05);

  for (int i = 0; i < 50; ++i) {
    const double u = s.uniform01();
    CHECK(u > 0.0);
    CHECK(u < 1.0);
  }
  for (int n = 2; n <= 4; ++n) {
    CHECK(std::abs(s.direction(n).norm() - 1.0) <= 1e-12);
    CHECK(s.normal_vector(n).size() == n);
  }
}

TEST_CASE("sphere_surface_area matches the closed forms") {
  const double pi = std::numbers::pi;
  CHECK(sphere_surface_area(2) == doctest::Approx(2.0 * pi).epsilon(1e-15));
  CHECK(sphere_surface_area(3) == doctest::Approx(4.0 * pi).epsilon(1e-15));
  CHECK(sphere_surface_area(4) == doctest::Approx(2.0 * pi * pi).epsilon(1e-15));
  CHECK(sphere_surface_area(5) == doctest::Approx(8.0 * pi * pi / 3.0).epsilon(1e-15));
}

TEST_CASE("finite-difference stencils recover analytic derivatives") {
  const auto f = [](const Vector& x) {
    return std::exp(x[0]) * std::sin(x[1]) + x[0] * x[0] * x[1] * x[1] * x[1];
  };
  Vector x(2);
  x << 0.3, -0.7;
  const double e = std::exp(x[0]), s = std::sin(x[1]), c = std::cos(x[1]);

  Vector grad_exact(2);
  grad_exact << e * s + 2.0 * x[0] * std::pow(x[1], 3), e * c + 3.0 * x[0] * x[0] * x[1] * x[1];
  const Vector g = fd::gradient(f, x, fd::kCbrtEps);
  CHECK((g - grad_exact).norm() <= 1e-8);
  const Vector gr = fd::gradient(f, x, fd::kCbrtEps, true);
  CHECK((gr - grad_exact).norm() <= 1e-10);

  Matrix hess_exact(2, 2);
  hess_exact << e * s + 2.0 * std::pow(x[1], 3), e * c + 6.0 * x[0] * x[1] * x[1],
      e * c + 6.0 * x[0] * x[1] * x[1], -e * s + 6.0 * x[0] * x[0] * x[1];
  const Matrix H = fd::hessian(f, x, fd::kCbrtEps);
  CHECK((H - hess_exact).norm() <= 5e-6);
  const Matrix Hr = fd::hessian(f, x, fd::kCbrtEps, true);
  CHECK((Hr - hess_exact).norm() <= 1e-7);

  Tensor3 T = fd::third(f, x, fd::kThirdStep);
  CHECK(std::abs(T(0, 0, 0) - e * s) <= 1e-4);
  CHECK(std::abs(T(0, 0, 1) - (e * c + 6.0 * x[1] * x[1])) <= 1e-4);
  CHECK(std::abs(T(0, 1, 1) - (-e * s + 12.0 * x[0] * x[1])) <= 1e-4);
  CHECK(std::abs(T(1, 1, 1) - (-e * c + 6.0 * x[0] * x[0])) <= 1e-4);
  // index-permutation symmetry comes from the stencil itself
  CHECK(T(0, 1, 0) == T(0, 0, 1));
  CHECK(T(1, 0, 1) == T(0, 1, 1));
}
