#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "mlab/bodies.hpp"
#include "mlab/common.hpp"

namespace mlab {

enum class RuleKind { trapezoid2d, gauss_product3d, montecarlo, qmc };

const char* rule_kind_name(RuleKind kind);
std::optional<RuleKind> parse_rule_kind(std::string_view name);

/// Quadrature rule on the Euclidean unit sphere S^{n-1}: unit nodes with
/// positive weights summing to the sphere surface area.
struct SphereRule {
  int dimension = 0;
  RuleKind kind = RuleKind::trapezoid2d;
  std::vector<Vector> nodes;
  std::vector<double> weights;
  std::uint64_t seed = 0;  // consumed by montecarlo only

  int node_count() const { return static_cast<int>(nodes.size()); }
  bool deterministic() const { return kind != RuleKind::montecarlo; }
};

/// Builds a sphere rule.
///   trapezoid2d     n = 2 only; uniform angular grid starting at angle 0
///                   (spectrally accurate for smooth integrands).
///   gauss_product3d n = 3 only; Gauss-Legendre in cos(theta) times uniform
///                   azimuth.  node_count is rounded to the nearest
///                   N_theta x (2 N_theta) product grid.
///   montecarlo      any n; normalized-Gaussian directions from `seed`,
///                   equal weights area/N.
///   qmc             any n; deterministic low-discrepancy (Halton) mapped
///                   directions, equal weights area/N.
/// Deterministic accuracy is only offered for n in {2, 3}; higher dimensions
/// must use montecarlo/qmc so downstream reports carry standard errors.
SphereRule build_rule(int n, RuleKind kind, int node_count, std::uint64_t seed = 0);

struct IndicatrixIntegral {
  double value = 0.0;
  double standard_error = 0.0;  // 0 for deterministic rules
  RuleKind kind = RuleKind::trapezoid2d;
  int node_count = 0;
};

using ScalarField = std::function<double(const Vector&)>;

/// Integral of a zero-homogeneous f over the gauge's indicatrix {L = 1} with
/// the metric surface measure, pulled back to the sphere rule:
///   sum_k w_k phi(u_k)^n f(u_k) sqrt(det g(u_k)),  phi(u) = 1/L(u).
/// Zero-homogeneity of f is the caller's contract; it is spot-checked at
/// three rule nodes with t = 2 and tolerance 1e-8 * (1 + |f|).
/// Summation is pairwise, so results are reproducible across runs.
IndicatrixIntegral integrate_indicatrix(const BodySpec& spec, const ScalarField& f,
                                        const SphereRule& rule);

/// Relative error |det J - phi^n| / phi^n of the finite-difference Jacobian
/// of the radial map T(v) = phi(v) v, phi(v) = |v| / L(v), against its
/// closed-form determinant phi^n(v).
double verify_jacobian_lemma(const BodySpec& spec, const Vector& v);

/// Divergence-theorem cross-check: returns (lhs, rhs) with
///   lhs = integral of f over the solid body K in the metric volume,
///         computed by 64-point Gauss-Legendre along each ray (integrand
///         honestly re-evaluated at the interior points r u), and
///   rhs = (1/n) * integral of f over the indicatrix.
/// The two agree in exact arithmetic for zero-homogeneous f.
std::pair<double, double> verify_divergence_identity(const BodySpec& spec, const ScalarField& f,
                                                     const SphereRule& rule);

/// One node per row: x_1, ..., x_n, weight (17 significant digits).
void write_rule_csv(const SphereRule& rule, std::ostream& os);

}  // namespace mlab
