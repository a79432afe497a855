#pragma once

#include <iosfwd>
#include <utility>
#include <vector>

#include "mlab/bodies.hpp"

namespace mlab {

/// Default guard band: context base points must satisfy L(p) <= 1 - delta.
/// Derivative steps and root solves degrade as p approaches the boundary.
inline constexpr double kInteriorGuard = 1e-3;

/// A body together with an interior base point p, exposing the family of
/// gauges F(p, .) = gauge of (K - p) and its derivatives.
class FunkContext {
 public:
  static FunkContext make(BodySpec body, Vector p, double delta = kInteriorGuard);

  const BodySpec& body() const { return body_; }
  const Vector& base_point() const { return p_; }
  const BodySpec& gauge_at_p() const { return gauge_; }
  double interior_margin() const { return margin_; }  // 1 - L(p)

 private:
  FunkContext(BodySpec body, Vector p, BodySpec gauge, double margin)
      : body_(std::move(body)), p_(std::move(p)), gauge_(std::move(gauge)), margin_(margin) {}

  BodySpec body_;
  Vector p_;
  BodySpec gauge_;
  double margin_;
};

/// F(p, v): the unique t > 0 with L(p + v/t) = 1.  Free functions in this
/// module require only strict interiority (L(p) < 1); FunkContext applies
/// the delta guard band.
double funk_value(const BodySpec& body, const Vector& p, const Vector& v);

/// Pointwise residual of the identity dF/dx_i = F dF/dy_i: returns the
/// covector F * dF/dy - dF/dx, with the x-derivatives taken by central
/// differences over the base point (step scaled by the interior margin).
Vector okada_residual(const BodySpec& body, const Vector& p, const Vector& v);

/// Checks that rho(v) = p + v/F(p, v) pulls the body metric back to a
/// multiple of the F(p, .) metric on the indicatrix tangent space:
///   g_L at rho  =  factor * g_F at v   on ker dF,  factor = 1 - <p, dL(rho)>.
/// Returns (factor, deviation), deviation being the worst entry mismatch of
/// the two restricted Gram matrices normalized by the largest entry of the
/// base-side Gram (entrywise division would divide by zero off-diagonal).
/// The tangent basis is the Euclidean orthogonal complement of dF,
/// Gram-Schmidt over coordinate axes in index order, so runs reproduce.
std::pair<double, double> conformal_factor_check(const BodySpec& body, const Vector& p,
                                                 const Vector& v);

/// Geodesic spray data of the Funk gauge at (p, v):
///   G^k = (1/2) F v^k,   Gi(k, i) = dG^k/dy^i = (F/2) delta_ki + (1/2) v^k dF_i.
struct SprayData {
  double F = 0.0;
  Vector dF;
  Vector G;
  Matrix Gi;
};
SprayData spray_coefficients(const BodySpec& body, const Vector& p, const Vector& v);

/// Vertical (y-)component of the horizontal lift of a constant field X,
/// namely -Gi * X.
Vector horizontal_vertical_part(const SprayData& spray, const Vector& X);

/// Curvature of the horizontal distribution evaluated two ways:
///   (a) R^k = X^h(G_Y^k) - Y^h(G_X^k) with horizontal directional
///       derivatives taken by central differences in x and y, and
///   (b) the closed form (1/4) (g(X, v) Y - g(Y, v) X) in the Funk metric g
///       at (p, v).
/// Returns the component-wise max deviation between the two.
double curvature_check(const BodySpec& body, const Vector& p, const Vector& v, const Vector& X,
                       const Vector& Y);

/// Funk geodesic with initial data (p, v): positions p + theta(t) v with
/// theta(t) = (1 - exp(-t F0)) / F0 and F0 = F(p, v); velocity theta'(t) v.
/// The limit point p + v/F0 lies on the body's boundary.
struct GeodesicTrace {
  Vector p;
  Vector v;
  double F0 = 0.0;
  struct Sample {
    double t = 0.0;
    Vector position;
    Vector velocity;
    double ode_residual = 0.0;  // max-abs of c'' + F(c, c') c', c'' by FD in t
  };
  std::vector<Sample> samples;
  Vector endpoint;
};
GeodesicTrace geodesic(const BodySpec& body, const Vector& p, const Vector& v, double t_max,
                       int sample_count);

/// One sample per row: t, x_1..x_n, y_1..y_n, ode_residual.
void write_geodesic_csv(const GeodesicTrace& trace, std::ostream& os);

}  // namespace mlab
