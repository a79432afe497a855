#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "mlab/common.hpp"

namespace mlab {

/// Deterministic pairwise summation: fixed reduction tree independent of
/// the platform, error growth O(log N) instead of O(N).
double pairwise_sum(std::span<const double> xs);

/// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int count, std::vector<double>& nodes, std::vector<double>& weights);

/// Van der Corput radical inverse of `index` in base `base`; in (0,1) for index >= 1.
double halton(std::uint64_t index, int base);

/// Quasi-random point on the unit sphere S^{n-1}.  Uses the angle map for
/// n = 2, the area-preserving cylindrical map for n = 3, and inverse-normal
/// transformed Halton coordinates for n >= 4.
Vector halton_sphere_point(std::uint64_t index, int n);

/// Inverse of the standard normal CDF (rational approximation plus one
/// Halley refinement, ~1e-15 accurate away from the extreme tails).
double inverse_normal_cdf(double p);

/// Deterministic Gaussian sampler: mt19937_64 bits converted manually, so a
/// fixed seed gives a bit-identical stream on every platform.
class GaussianSampler {
 public:
  explicit GaussianSampler(std::uint64_t seed) : rng_(seed) {}

  /// Uniform in the open interval (0, 1).
  double uniform01() { return (static_cast<double>(rng_() >> 11) + 0.5) * 0x1.0p-53; }

  double normal();

  /// Standard Gaussian vector of length n.
  Vector normal_vector(int n);

  /// Uniform random direction on S^{n-1}.
  Vector direction(int n);

 private:
  std::mt19937_64 rng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

/// Surface area of the unit sphere S^{n-1} in R^n.
double sphere_surface_area(int n);

}  // namespace mlab
