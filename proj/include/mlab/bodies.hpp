#pragma once

#include <memory>
#include <optional>
#include <string>

#include "mlab/common.hpp"
#include "mlab/errors.hpp"

namespace mlab {

/// Relative floor for the smallest metric eigenvalue: a jet whose Hessian has
/// lambda_min <= floor * lambda_max is rejected as degenerate.
inline constexpr double kDefinitenessFloor = 1e-8;

/// Convergence criterion |L_inner - 1| for the translated-gauge root solve.
inline constexpr double kTranslatedRootTol = 1e-12;

enum class Family { ellipsoid, randers, quartic, translated };

enum class DerivativeMode { analytic, finite_difference };

const char* family_name(Family f);

struct FdOptions {
  bool richardson = false;  // one extrapolation level on a widened base step
};

/// Immutable description of a convex body through its Minkowski gauge L.
///
///   ellipsoid   L(v) = sqrt(v^T A v),                   A SPD
///   randers     L(v) = sqrt(v^T A v) + <b, v>,          A SPD, b^T A^-1 b < 1
///   quartic     L(v)^2 = (Q + sqrt(Q^2 + 4 eps P)) / 2, Q = v^T A v,
///               P(v) = sum_i c_i v_i^4, c_i >= 0, eps >= 0
///   translated  gauge of K_inner - shift, with L_inner(shift) < 1
///
/// Construction performs structural validation only (SPD checks, one-form
/// norm, interior shift); smoothness/strong-convexity sampling is the job of
/// validate_spec().
class BodySpec {
 public:
  static BodySpec ellipsoid(Matrix A);
  static BodySpec randers(Matrix A, Vector b);
  static BodySpec quartic(Matrix A, Vector c, double epsilon);
  static BodySpec translated(BodySpec inner, Vector shift);

  int dimension() const { return dim_; }
  Family family() const { return family_; }

  const Matrix& matrix() const;              // A (ellipsoid, randers, quartic)
  const Vector& linear_form() const;         // b (randers)
  const Vector& quartic_coefficients() const;
  double quartic_epsilon() const;
  const BodySpec& inner() const;             // translated
  const Vector& shift() const;               // translated

  /// Equivalent spec with nested translations flattened and closed-form
  /// translations collapsed; evaluation always goes through this.
  const BodySpec& canonical() const { return canonical_ ? *canonical_ : *this; }

 private:
  BodySpec() = default;

  Family family_ = Family::ellipsoid;
  int dim_ = 0;
  Matrix A_;
  Vector b_;
  Vector c_;
  double eps_ = 0.0;
  std::shared_ptr<const BodySpec> inner_;
  Vector shift_;
  std::shared_ptr<const BodySpec> canonical_;
};

/// Second-order data of the gauge at a point: value, gradient, the
/// Riemann-Finsler metric g = Hess(L^2/2), and the Cartan coefficients
/// C_ijk = (1/2) d g_ij / d y_k.
struct GaugeJet {
  Vector point;
  double L = 0.0;
  Vector dL;
  Matrix g;
  Tensor3 C3;
  DerivativeMode derivative_mode = DerivativeMode::analytic;
};

struct ValidationReport {
  bool passed = false;
  int samples = 0;
  double max_homogeneity_error = 0.0;   // relative, over t in {0.5, 2, 7.3}
  double min_eigenvalue = 0.0;          // smallest metric eigenvalue seen
  double min_eigenvalue_ratio = 0.0;    // smallest lambda_min / lambda_max seen
  std::optional<Vector> failure_point;  // first sample that failed
  std::string failure_reason;
};

/// Gauge value L(v).  Throws ZeroVector for v = 0.
double evaluate_gauge(const BodySpec& spec, const Vector& v);

/// Gradient of L at v; closed form for all families (translated gauges use
/// the boundary-point identity dF = dL(rho) / (1 - <shift, dL(rho)>)).
Vector gauge_gradient(const BodySpec& spec, const Vector& v);

/// Full jet in the family's best available mode: closed-form derivatives for
/// ellipsoid/randers/quartic, the semi-analytic boundary-point path for
/// translated gauges (its Cartan coefficients difference the metric, so it
/// reports finite_difference).
GaugeJet gauge_jet(const BodySpec& spec, const Vector& v);

/// Jet in an explicitly requested mode.  finite_difference always builds the
/// jet from gauge values alone (the in-library cross-check path); analytic
/// falls back to the best available path when no closed form exists.
GaugeJet gauge_jet(const BodySpec& spec, const Vector& v, DerivativeMode mode,
                   const FdOptions& opts = {});

/// Cartan trace C_i = g^{jk} C_ijk (equivalently d ln sqrt(det g) / d y_i).
Vector cartan_trace(const GaugeJet& jet);

/// Q^l_ijk = C^l_sk C^s_ij - C^l_sj C^s_ik with C^k_ij = g^{kl} C_ijl;
/// vanishes identically iff the metric is Riemannian (ellipsoid gauge).
Tensor4 q_curvature(const GaugeJet& jet);

/// Samples quasi-random sphere directions and checks positive 1-homogeneity
/// plus the metric definiteness floor.  Never throws: failures are recorded
/// in the report together with the first offending sample.
ValidationReport validate_spec(const BodySpec& spec, int samples);
ValidationReport validate_spec(const BodySpec& spec, int samples, DerivativeMode mode);

/// Gauge of the body translated by -p (the body as seen from base point p).
/// Ellipsoid and Randers bodies translate in closed form to Randers specs;
/// nested translations flatten by adding shifts.
BodySpec translate_spec(const BodySpec& spec, const Vector& p);

}  // namespace mlab
