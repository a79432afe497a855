#pragma once

#include <optional>
#include <utility>

#include "mlab/bodies.hpp"
#include "mlab/quadrature.hpp"

namespace mlab {

/// Relative threshold on max|beta_i| / area for the balancedness verdict.
inline constexpr double kBalanceTolerance = 1e-8;

/// Indicatrix averages of a gauge: the integrals
///   gamma1 = int g dmu,  gamma3 = int dL (x) dL dmu,  gamma2 = gamma1 - gamma3,
///   beta_i = int dL_i dmu,  area = int 1 dmu,
/// their area-normalized versions Gamma_i, and the balancedness verdict.
struct AveragedReport {
  double area = 0.0;
  Matrix gamma1, gamma2, gamma3;
  Vector beta;
  Matrix Gamma1, Gamma2, Gamma3;  // gamma_i / area
  bool balanced = false;
  double beta_sup_norm_G1 = 0.0;  // sqrt(beta^T Gamma1^-1 beta) / area
  double beta_sup_norm_G3 = 0.0;

  struct StandardErrors {  // stochastic rules only; gamma2 omitted (it is
    double area = 0.0;     // the difference of two correlated estimates)
    Matrix gamma1, gamma3;
    Vector beta;
  };
  std::optional<StandardErrors> standard_errors;

  RuleKind rule_kind = RuleKind::trapezoid2d;  // provenance of the numbers
  int node_count = 0;
};

/// Single quadrature pass assembling all averages.  The gamma matrices are
/// symmetrized after assembly; Gamma1 and Gamma3 must pass an SPD check.
AveragedReport averaged_report(const BodySpec& spec, const SphereRule& rule);

/// Residual of the divergence-theorem identity
///   v^i int L C_i dmu = (n - 1) beta(v),
/// normalized as |lhs - rhs| / (1 + |rhs|); zero in exact arithmetic.
double remark1_identity_residual(const BodySpec& spec, const Vector& v, const SphereRule& rule);

enum class RandersWhich { F1, F3 };

/// Gauge sqrt(v^T Gamma v) + <beta/area, v> built from the averages.
struct RandersFunctional {
  Matrix base_metric;
  Vector one_form;
  RandersWhich which = RandersWhich::F1;

  double operator()(const Vector& v) const;
  BodySpec to_body_spec() const;
};

/// Builds F1 (from Gamma1) or F3 (from Gamma3).  The one-form norm in the
/// base metric must be < 1; a violation signals numerical inconsistency.
RandersFunctional make_randers(const AveragedReport& report, RandersWhich which);

/// For a linear map Phi preserving the gauge (spot-checked at 8 quasi-random
/// points, 1e-10 relative), returns the worst invariance defect among
///   |Phi^T gamma_i Phi - gamma_i| / |gamma_i|   (i = 1, 2, 3, Frobenius)
/// and |Phi^T beta - beta| / area.
double isometry_invariance_check(const BodySpec& spec, const Matrix& Phi, const SphereRule& rule);

/// Least-squares scalar lambda with gamma2 ~ lambda * gamma1, along with the
/// relative Frobenius residual of that fit (meaningful for bodies whose
/// symmetry forces proportionality; equals (n-1)/n for the Euclidean ball).
std::pair<double, double> lambda_estimate(const AveragedReport& report);

}  // namespace mlab
