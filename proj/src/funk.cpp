#include "mlab/funk.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "mlab/finite_diff.hpp"

namespace mlab {

namespace {

/// 1 - L(p), accepting p = 0 (where the gauge itself is undefined).
double margin_of(const BodySpec& body, const Vector& p) {
  if (p.size() != body.dimension())
    throw std::invalid_argument("funk: base point length does not match dimension");
  if (p.isZero(0.0)) return 1.0;
  return 1.0 - evaluate_gauge(body, p);
}

double require_interior(const BodySpec& body, const Vector& p, double delta) {
  const double margin = margin_of(body, p);
  if (!(margin > delta))
    throw BasePointOutside("base point has interior margin " + std::to_string(margin) +
                           ", need > " + std::to_string(delta));
  return margin;
}

}  // namespace

FunkContext FunkContext::make(BodySpec body, Vector p, double delta) {
  const double margin = require_interior(body, p, delta);
  BodySpec gauge = translate_spec(body, p);
  return FunkContext(std::move(body), std::move(p), std::move(gauge), margin);
}

double funk_value(const BodySpec& body, const Vector& p, const Vector& v) {
  require_interior(body, p, 0.0);
  return evaluate_gauge(translate_spec(body, p), v);
}

Vector okada_residual(const BodySpec& body, const Vector& p, const Vector& v) {
  const double margin = require_interior(body, p, 0.0);
  const BodySpec gauge = translate_spec(body, p);
  const double F = evaluate_gauge(gauge, v);
  const Vector dFy = gauge_gradient(gauge, v);

  const int n = body.dimension();
  const double h = fd::kCbrtEps * margin;
  Vector residual(n);
  for (int i = 0; i < n; ++i) {
    Vector a = p, b = p;
    a[i] += h;
    b[i] -= h;
    const double Fa = evaluate_gauge(translate_spec(body, a), v);
    const double Fb = evaluate_gauge(translate_spec(body, b), v);
    residual[i] = F * dFy[i] - (Fa - Fb) / (2.0 * h);
  }
  return residual;
}

namespace {

/// Orthonormal basis of the Euclidean orthogonal complement of d, built by
/// Gram-Schmidt over coordinate axes in index order.
std::vector<Vector> complement_basis(const Vector& d) {
  const int n = static_cast<int>(d.size());
  std::vector<Vector> basis;
  basis.reserve(n - 1);
  const Vector dn = d / d.norm();
  for (int i = 0; i < n && static_cast<int>(basis.size()) < n - 1; ++i) {
    Vector w = Vector::Unit(n, i);
    w -= dn.dot(w) * dn;
    for (const Vector& b : basis) w -= b.dot(w) * b;
    const double norm = w.norm();
    if (norm > 1e-8) basis.push_back(w / norm);
  }
  if (static_cast<int>(basis.size()) != n - 1)
    throw DegenerateTangent("tangent basis of the indicatrix lost rank");
  return basis;
}

}  // namespace

std::pair<double, double> conformal_factor_check(const BodySpec& body, const Vector& p,
                                                 const Vector& v) {
  require_interior(body, p, 0.0);
  const BodySpec gauge = translate_spec(body, p);
  const GaugeJet jf = gauge_jet(gauge, v);
  const Vector rho = p + v / jf.L;
  const GaugeJet jl = gauge_jet(body, rho);
  const double factor = 1.0 - p.dot(jl.dL);

  // dF and dL(rho) are parallel, so one basis spans both tangent spaces
  const std::vector<Vector> basis = complement_basis(jf.dL);
  const int m = static_cast<int>(basis.size());
  Matrix base(m, m), mapped(m, m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      base(a, b) = basis[a].dot(jl.g * basis[b]);
      mapped(a, b) = factor * basis[a].dot(jf.g * basis[b]);
    }
  const double scale = base.cwiseAbs().maxCoeff();
  const double deviation = (base - mapped).cwiseAbs().maxCoeff() / scale;
  return {factor, deviation};
}

SprayData spray_coefficients(const BodySpec& body, const Vector& p, const Vector& v) {
  require_interior(body, p, 0.0);
  const BodySpec gauge = translate_spec(body, p);
  SprayData s;
  s.F = evaluate_gauge(gauge, v);
  s.dF = gauge_gradient(gauge, v);
  s.G = 0.5 * s.F * v;
  const int n = body.dimension();
  s.Gi = 0.5 * s.F * Matrix::Identity(n, n) + 0.5 * v * s.dF.transpose();
  return s;
}

Vector horizontal_vertical_part(const SprayData& spray, const Vector& X) {
  return -(spray.Gi * X);
}

double curvature_check(const BodySpec& body, const Vector& p, const Vector& v, const Vector& X,
                       const Vector& Y) {
  const double margin = require_interior(body, p, 0.0);
  const BodySpec gauge = translate_spec(body, p);
  const int n = body.dimension();

  // closed form: (1/4) (g(X, v) Y - g(Y, v) X) in the Funk metric at (p, v)
  const GaugeJet jf = gauge_jet(gauge, v);
  const double gXv = X.dot(jf.g * v);
  const double gYv = Y.dot(jf.g * v);
  const Vector closed = 0.25 * (gXv * Y - gYv * X);

  // G_Z^k = Z^i Gi(k, i) as a function of base point and direction
  const auto GZ = [&](const Vector& base, const Vector& y, const Vector& Z) -> Vector {
    const BodySpec g_at = translate_spec(body, base);
    const double F = evaluate_gauge(g_at, y);
    const Vector dF = gauge_gradient(g_at, y);
    return 0.5 * F * Z + 0.5 * (Z.dot(dF)) * y;
  };

  const SprayData sp = spray_coefficients(body, p, v);
  const Vector GX = sp.Gi * X;  // G_X at (p, v)
  const Vector GY = sp.Gi * Y;

  // horizontal derivative Z^h(G_W) = (d/dx along Z) G_W - (d/dy along G_Z) G_W
  const auto horizontal_derivative = [&](const Vector& Z, const Vector& GZ_at,
                                         const Vector& W) -> Vector {
    const double hx = fd::kCbrtEps * margin / std::max(1.0, Z.norm());
    const Vector dx = (GZ(p + hx * Z, v, W) - GZ(p - hx * Z, v, W)) / (2.0 * hx);
    const double hy = fd::kCbrtEps * fd::scale_of(v) / std::max(1.0, GZ_at.norm());
    const Vector dy = (GZ(p, v + hy * GZ_at, W) - GZ(p, v - hy * GZ_at, W)) / (2.0 * hy);
    return dx - dy;
  };

  const Vector R_fd = horizontal_derivative(X, GX, Y) - horizontal_derivative(Y, GY, X);
  double worst = 0.0;
  for (int k = 0; k < n; ++k) worst = std::max(worst, std::abs(R_fd[k] - closed[k]));
  return worst;
}

GeodesicTrace geodesic(const BodySpec& body, const Vector& p, const Vector& v, double t_max,
                       int sample_count) {
  require_interior(body, p, 0.0);
  if (v.isZero(0.0)) throw ZeroVector("geodesic: zero initial velocity");
  if (!(t_max > 0.0) || sample_count < 2)
    throw std::invalid_argument("geodesic: need t_max > 0 and at least 2 samples");

  GeodesicTrace trace;
  trace.p = p;
  trace.v = v;
  trace.F0 = funk_value(body, p, v);
  trace.endpoint = p + v / trace.F0;

  const double F0 = trace.F0;
  const auto theta = [F0](double t) { return (1.0 - std::exp(-t * F0)) / F0; };
  const auto position = [&](double t) -> Vector { return p + theta(t) * v; };

  const double ht = fd::kQurtEps;  // second differences of an O(1)-smooth path
  trace.samples.reserve(sample_count);
  for (int k = 0; k < sample_count; ++k) {
    GeodesicTrace::Sample s;
    s.t = t_max * k / (sample_count - 1);
    s.position = position(s.t);
    s.velocity = std::exp(-s.t * F0) * v;
    const Vector acc =
        (position(s.t + ht) - 2.0 * s.position + position(s.t - ht)) / (ht * ht);
    const double F = funk_value(body, s.position, s.velocity);
    s.ode_residual = (acc + F * s.velocity).cwiseAbs().maxCoeff();
    trace.samples.push_back(std::move(s));
  }
  return trace;
}

void write_geodesic_csv(const GeodesicTrace& trace, std::ostream& os) {
  const int n = static_cast<int>(trace.p.size());
  os << "t";
  for (int i = 0; i < n; ++i) os << ",x" << i + 1;
  for (int i = 0; i < n; ++i) os << ",y" << i + 1;
  os << ",ode_residual\n";
  char buf[64];
  for (const auto& s : trace.samples) {
    std::snprintf(buf, sizeof buf, "%.17g", s.t);
    os << buf;
    for (int i = 0; i < n; ++i) {
      std::snprintf(buf, sizeof buf, ",%.17g", s.position[i]);
      os << buf;
    }
    for (int i = 0; i < n; ++i) {
      std::snprintf(buf, sizeof buf, ",%.17g", s.velocity[i]);
      os << buf;
    }
    std::snprintf(buf, sizeof buf, ",%.17g\n", s.ode_residual);
    os << buf;
  }
}

}  // namespace mlab
