#include "mlab/bodies.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "mlab/finite_diff.hpp"
#include "mlab/numerics.hpp"

namespace mlab {

namespace {

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

/// Structural SPD check; returns the symmetrized matrix.
Matrix require_spd(const Matrix& A, const char* what) {
  if (A.rows() != A.cols())
    throw InvalidSpec(std::string(what) + ": matrix is not square");
  const double scale = A.cwiseAbs().maxCoeff();
  if ((A - A.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(scale, 1.0))
    throw InvalidSpec(std::string(what) + ": matrix is not symmetric");
  Matrix S = 0.5 * (A + A.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(S, Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().maxCoeff();
  if (!(lo > 0.0) || lo <= 1e-12 * hi)
    throw InvalidSpec(std::string(what) + ": matrix is not positive definite (min eigenvalue " +
                      fmt(lo) + ")");
  return S;
}

void check_dimension(int n) {
  if (n < 2) throw InvalidSpec("dimension must be at least 2");
}

void require_arg_size(const Vector& v, int n, const char* what) {
  if (v.size() != n) throw std::invalid_argument(std::string(what) + ": wrong vector length");
}

struct QuarticEval {
  double Q, S, E;  // S = sqrt(Q^2 + 4 eps P), E = L^2/2 = (Q + S)/4
};

QuarticEval quartic_eval(const Matrix& A, const Vector& c, double eps, const Vector& v) {
  QuarticEval r;
  r.Q = v.dot(A * v);
  double P = 0.0;
  for (int i = 0; i < v.size(); ++i) {
    const double s2 = v[i] * v[i];
    P += c[i] * s2 * s2;
  }
  r.S = std::sqrt(r.Q * r.Q + 4.0 * eps * P);
  r.E = 0.25 * (r.Q + r.S);
  return r;
}

/// Definiteness floor applied to every jet before it leaves the module.
void enforce_definiteness(Matrix& g, const Vector& v) {
  g = 0.5 * (g + g.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Matrix> es(g, Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().maxCoeff();
  if (!(hi > 0.0) || lo <= kDefinitenessFloor * hi) {
    std::ostringstream os;
    os << "metric eigenvalues [" << fmt(lo) << ", " << fmt(hi) << "] below definiteness floor at v = (";
    for (int i = 0; i < v.size(); ++i) os << (i ? ", " : "") << fmt(v[i]);
    os << ")";
    throw DegenerateHessian(os.str());
  }
}

/// Inverse of a jet metric; rejects near-singular input.
Matrix metric_inverse(const Matrix& g) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(g);
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().maxCoeff();
  if (!(hi > 0.0) || lo <= 1e-14 * hi)
    throw SingularMetric("metric is numerically singular (eigenvalues " + fmt(lo) + ", " + fmt(hi) + ")");
  return es.eigenvectors() *
         es.eigenvalues().cwiseInverse().asDiagonal() *
         es.eigenvectors().transpose();
}

}  // namespace

const char* family_name(Family f) {
  switch (f) {
    case Family::ellipsoid: return "ellipsoid";
    case Family::randers: return "randers";
    case Family::quartic: return "quartic";
    case Family::translated: return "translated";
  }
  return "?";
}

//---------------------------------------------------------------------------//
//  construction and canonicalization
//---------------------------------------------------------------------------//

BodySpec BodySpec::ellipsoid(Matrix A) {
  BodySpec s;
  s.family_ = Family::ellipsoid;
  s.dim_ = static_cast<int>(A.rows());
  check_dimension(s.dim_);
  s.A_ = require_spd(A, "ellipsoid");
  return s;
}

BodySpec BodySpec::randers(Matrix A, Vector b) {
  BodySpec s;
  s.family_ = Family::randers;
  s.dim_ = static_cast<int>(A.rows());
  check_dimension(s.dim_);
  s.A_ = require_spd(A, "randers");
  if (b.size() != s.dim_) throw InvalidSpec("randers: one-form length does not match dimension");
  const double norm2 = b.dot(s.A_.llt().solve(b));
  if (!(norm2 < 1.0))
    throw InvalidSpec("randers: one-form norm b^T A^-1 b = " + fmt(norm2) + " must be < 1");
  s.b_ = std::move(b);
  return s;
}

BodySpec BodySpec::quartic(Matrix A, Vector c, double epsilon) {
  BodySpec s;
  s.family_ = Family::quartic;
  s.dim_ = static_cast<int>(A.rows());
  check_dimension(s.dim_);
  s.A_ = require_spd(A, "quartic");
  if (c.size() != s.dim_) throw InvalidSpec("quartic: coefficient vector length does not match dimension");
  for (int i = 0; i < c.size(); ++i)
    if (!(c[i] >= 0.0)) throw InvalidSpec("quartic: coefficients must be nonnegative");
  if (!(epsilon >= 0.0)) throw InvalidSpec("quartic: epsilon must be nonnegative");
  s.c_ = std::move(c);
  s.eps_ = epsilon;
  return s;
}

namespace {

/// Gauge of {v : v^T A v <= 1} - p as a Randers spec (exact algebra).
BodySpec translate_ellipsoid_body(const Matrix& A, const Vector& p) {
  const Vector Ap = A * p;
  const double q = p.dot(Ap);
  const double denom = 1.0 - q;
  if (!(denom > 0.0)) throw InvalidSpec("translated: shift lies outside the ellipsoid");
  const Matrix At = (denom * A + Ap * Ap.transpose()) / (denom * denom);
  return BodySpec::randers(At, Ap / denom);
}

/// Gauge of a Randers body minus p, again a Randers spec.
BodySpec translate_randers_body(const Matrix& A, const Vector& b, const Vector& p) {
  const double c = 1.0 - b.dot(p);
  const double D = c * c - p.dot(A * p);
  if (!(c > 0.0 && D > 0.0)) throw InvalidSpec("translated: shift lies outside the randers body");
  const Vector r = A * p + c * b;
  const Matrix core = A - b * b.transpose();
  const Matrix At = (D * core + r * r.transpose()) / (D * D);
  return BodySpec::randers(At, r / D);
}

}  // namespace

BodySpec BodySpec::translated(BodySpec inner, Vector shift) {
  const int n = inner.dimension();
  if (shift.size() != n) throw InvalidSpec("translated: shift length does not match dimension");
  if (!shift.isZero(0.0)) {
    const double Lp = evaluate_gauge(inner, shift);
    if (!(Lp < 1.0))
      throw InvalidSpec("translated: shift has gauge " + fmt(Lp) + ", must be interior (< 1)");
  }

  BodySpec s;
  s.family_ = Family::translated;
  s.dim_ = n;
  s.shift_ = shift;

  // Canonical form: flatten nested translations, collapse closed forms.
  const BodySpec& ic = inner.canonical();
  BodySpec base = ic;
  Vector total = shift;
  if (ic.family() == Family::translated) {  // canonical inner is quartic-behind-shift
    total += ic.shift();
    base = ic.inner();
  }
  if (total.isZero(0.0)) {
    s.canonical_ = std::make_shared<const BodySpec>(base);
  } else {
    switch (base.family()) {
      case Family::ellipsoid:
        s.canonical_ = std::make_shared<const BodySpec>(translate_ellipsoid_body(base.matrix(), total));
        break;
      case Family::randers:
        s.canonical_ = std::make_shared<const BodySpec>(
            translate_randers_body(base.matrix(), base.linear_form(), total));
        break;
      case Family::quartic: {
        if (inner.family() == Family::quartic && total == shift) {
          s.canonical_ = nullptr;  // already in canonical form
        } else {
          BodySpec canon;
          canon.family_ = Family::translated;
          canon.dim_ = n;
          canon.shift_ = total;
          canon.inner_ = std::make_shared<const BodySpec>(base);
          canon.canonical_ = nullptr;
          const double Lp = evaluate_gauge(base, total);
          if (!(Lp < 1.0)) throw InvalidSpec("translated: combined shift leaves the body");
          s.canonical_ = std::make_shared<const BodySpec>(std::move(canon));
        }
        break;
      }
      case Family::translated:
        throw InvalidSpec("translated: canonicalization failed");  // unreachable
    }
  }
  s.inner_ = std::make_shared<const BodySpec>(std::move(inner));
  return s;
}

const Matrix& BodySpec::matrix() const {
  if (family_ == Family::translated) throw std::logic_error("matrix(): wrong family");
  return A_;
}
const Vector& BodySpec::linear_form() const {
  if (family_ != Family::randers) throw std::logic_error("linear_form(): wrong family");
  return b_;
}
const Vector& BodySpec::quartic_coefficients() const {
  if (family_ != Family::quartic) throw std::logic_error("quartic_coefficients(): wrong family");
  return c_;
}
double BodySpec::quartic_epsilon() const {
  if (family_ != Family::quartic) throw std::logic_error("quartic_epsilon(): wrong family");
  return eps_;
}
const BodySpec& BodySpec::inner() const {
  if (family_ != Family::translated || !inner_) throw std::logic_error("inner(): wrong family");
  return *inner_;
}
const Vector& BodySpec::shift() const {
  if (family_ != Family::translated) throw std::logic_error("shift(): wrong family");
  return shift_;
}

BodySpec translate_spec(const BodySpec& spec, const Vector& p) {
  require_arg_size(p, spec.dimension(), "translate_spec");
  if (p.isZero(0.0)) return spec;
  const BodySpec& c = spec.canonical();
  switch (c.family()) {
    case Family::ellipsoid:
      return translate_ellipsoid_body(c.matrix(), p);
    case Family::randers:
      return translate_randers_body(c.matrix(), c.linear_form(), p);
    case Family::quartic:
      return BodySpec::translated(c, p);
    case Family::translated:
      return BodySpec::translated(c.inner(), c.shift() + p);
  }
  throw std::logic_error("translate_spec: unknown family");
}

//---------------------------------------------------------------------------//
//  gauge evaluation
//---------------------------------------------------------------------------//

namespace {

struct TranslatedRoot {
  double s;    // unit-direction parameter: L_inner(p + s u) = 1
  double F;    // gauge value for the original v
  Vector rho;  // boundary point p + v / F
};

/// Solves L_inner(p + s v/|v|) = 1 by Newton with a bisection safeguard.
/// h(s) is convex with h(0) < 1, so the root is unique and bracketable by
/// doubling; convergence criterion |L_inner - 1| <= kTranslatedRootTol.
TranslatedRoot solve_translated(const BodySpec& inner, const Vector& p, const Vector& v) {
  const double vnorm = v.norm();
  const Vector u = v / vnorm;
  const auto h = [&](double s) { return evaluate_gauge(inner, p + s * u); };
  const auto dh = [&](double s) { return gauge_gradient(inner, p + s * u).dot(u); };

  double lo = 0.0, hi = 1.0;
  {
    int guard = 0;
    while (h(hi) < 1.0) {
      lo = hi;
      hi *= 2.0;
      if (++guard > 200) throw DidNotConverge("translated gauge: failed to bracket the boundary");
    }
  }
  double s = 0.5 * (lo + hi);
  double val = h(s) - 1.0;
  for (int iter = 0; iter < 100 && std::abs(val) > 5e-16; ++iter) {
    if (val < 0.0) lo = s; else hi = s;
    const double slope = dh(s);
    double next = s - val / slope;
    if (!std::isfinite(next) || next <= lo || next >= hi) next = 0.5 * (lo + hi);
    s = next;
    val = h(s) - 1.0;
  }
  if (std::abs(val) > kTranslatedRootTol)
    throw DidNotConverge("translated gauge: root solve stalled at |L-1| = " + fmt(std::abs(val)));
  TranslatedRoot r;
  r.s = s;
  r.F = vnorm / s;
  r.rho = p + s * u;
  return r;
}

}  // namespace

double evaluate_gauge(const BodySpec& spec, const Vector& v) {
  require_arg_size(v, spec.dimension(), "evaluate_gauge");
  if (v.isZero(0.0)) throw ZeroVector("evaluate_gauge: zero vector has no gauge direction");
  const BodySpec& c = spec.canonical();
  switch (c.family()) {
    case Family::ellipsoid:
      return std::sqrt(v.dot(c.matrix() * v));
    case Family::randers:
      return std::sqrt(v.dot(c.matrix() * v)) + c.linear_form().dot(v);
    case Family::quartic: {
      const QuarticEval q = quartic_eval(c.matrix(), c.quartic_coefficients(), c.quartic_epsilon(), v);
      return std::sqrt(2.0 * q.E);
    }
    case Family::translated:
      return solve_translated(c.inner(), c.shift(), v).F;
  }
  throw std::logic_error("evaluate_gauge: unknown family");
}

Vector gauge_gradient(const BodySpec& spec, const Vector& v) {
  require_arg_size(v, spec.dimension(), "gauge_gradient");
  if (v.isZero(0.0)) throw ZeroVector("gauge_gradient: zero vector");
  const BodySpec& c = spec.canonical();
  switch (c.family()) {
    case Family::ellipsoid: {
      const Vector w = c.matrix() * v;
      return w / std::sqrt(v.dot(w));
    }
    case Family::randers: {
      const Vector w = c.matrix() * v;
      return w / std::sqrt(v.dot(w)) + c.linear_form();
    }
    case Family::quartic: {
      const Matrix& A = c.matrix();
      const Vector& cc = c.quartic_coefficients();
      const double eps = c.quartic_epsilon();
      const QuarticEval q = quartic_eval(A, cc, eps, v);
      const Vector Qi = 2.0 * (A * v);
      Vector Pi(v.size());
      for (int i = 0; i < v.size(); ++i) Pi[i] = 4.0 * cc[i] * v[i] * v[i] * v[i];
      const Vector Si = (q.Q * Qi + 2.0 * eps * Pi) / q.S;
      const Vector dE = 0.25 * (Qi + Si);
      return dE / std::sqrt(2.0 * q.E);
    }
    case Family::translated: {
      const Vector& p = c.shift();
      const TranslatedRoot r = solve_translated(c.inner(), p, v);
      const Vector dLr = gauge_gradient(c.inner(), r.rho);
      const double denom = 1.0 - p.dot(dLr);
      if (!(denom > 0.0))
        throw Error("translated gauge: boundary-point denominator is not positive");
      return dLr / denom;
    }
  }
  throw std::logic_error("gauge_gradient: unknown family");
}

//---------------------------------------------------------------------------//
//  jets
//---------------------------------------------------------------------------//

namespace {

GaugeJet ellipsoid_jet(const BodySpec& c, const Vector& v) {
  GaugeJet j;
  j.point = v;
  const Vector w = c.matrix() * v;
  j.L = std::sqrt(v.dot(w));
  j.dL = w / j.L;
  j.g = c.matrix();
  j.C3 = Tensor3(static_cast<int>(v.size()));
  j.derivative_mode = DerivativeMode::analytic;
  return j;
}

GaugeJet randers_jet(const BodySpec& c, const Vector& v) {
  const int n = static_cast<int>(v.size());
  const Matrix& A = c.matrix();
  const Vector& b = c.linear_form();
  const Vector w = A * v;
  const double alpha = std::sqrt(v.dot(w));
  const double a3 = alpha * alpha * alpha;
  const double a5 = a3 * alpha * alpha;

  GaugeJet j;
  j.point = v;
  j.L = alpha + b.dot(v);
  j.dL = w / alpha + b;

  const Matrix aij = A / alpha - (w * w.transpose()) / a3;
  j.g = j.dL * j.dL.transpose() + j.L * aij;

  j.C3 = Tensor3(n);
  for (int i = 0; i < n; ++i)
    for (int jj = 0; jj < n; ++jj)
      for (int k = 0; k < n; ++k) {
        const double aijk = -(A(i, jj) * w[k] + A(i, k) * w[jj] + A(jj, k) * w[i]) / a3 +
                            3.0 * w[i] * w[jj] * w[k] / a5;
        j.C3(i, jj, k) = 0.5 * (aij(i, k) * j.dL[jj] + aij(jj, k) * j.dL[i] +
                                aij(i, jj) * j.dL[k] + j.L * aijk);
      }
  j.derivative_mode = DerivativeMode::analytic;
  return j;
}

GaugeJet quartic_jet(const BodySpec& c, const Vector& v) {
  const int n = static_cast<int>(v.size());
  const Matrix& A = c.matrix();
  const Vector& cc = c.quartic_coefficients();
  const double eps = c.quartic_epsilon();
  const QuarticEval q = quartic_eval(A, cc, eps, v);

  const Vector Qi = 2.0 * (A * v);
  const Matrix Qij = 2.0 * A;
  Vector Pi(n);
  for (int i = 0; i < n; ++i) Pi[i] = 4.0 * cc[i] * v[i] * v[i] * v[i];

  const Vector Si = (q.Q * Qi + 2.0 * eps * Pi) / q.S;
  Matrix Sij(n, n);
  for (int i = 0; i < n; ++i)
    for (int jj = 0; jj < n; ++jj) {
      const double Pij = (i == jj) ? 12.0 * cc[i] * v[i] * v[i] : 0.0;
      Sij(i, jj) = (Qi[i] * Qi[jj] + q.Q * Qij(i, jj) + 2.0 * eps * Pij - Si[i] * Si[jj]) / q.S;
    }

  GaugeJet j;
  j.point = v;
  j.L = std::sqrt(2.0 * q.E);
  j.dL = 0.25 * (Qi + Si) / j.L;
  j.g = 0.25 * (Qij + Sij);

  j.C3 = Tensor3(n);
  for (int i = 0; i < n; ++i)
    for (int jj = i; jj < n; ++jj)
      for (int k = jj; k < n; ++k) {
        const double Pijk = (i == jj && jj == k) ? 24.0 * cc[i] * v[i] : 0.0;
        const double Sijk = (Qij(i, k) * Qi[jj] + Qi[i] * Qij(jj, k) + Qi[k] * Qij(i, jj) +
                             2.0 * eps * Pijk - Sij(jj, k) * Si[i] - Si[jj] * Sij(i, k) -
                             Si[k] * Sij(i, jj)) /
                            q.S;
        const double val = 0.125 * Sijk;
        j.C3(i, jj, k) = j.C3(i, k, jj) = j.C3(jj, i, k) = val;
        j.C3(jj, k, i) = j.C3(k, i, jj) = j.C3(k, jj, i) = val;
      }
  j.derivative_mode = DerivativeMode::analytic;
  return j;
}

/// Value, y-gradient and metric of a canonical translated gauge, all from the
/// inner body's analytic jet at the boundary point rho = p + v/F.  The metric
/// follows from differentiating dF = dL(rho) / (1 - <p, dL(rho)>) once more.
struct TranslatedSecondOrder {
  double F;
  Vector dF;
  Matrix g;
  Vector rho;
};

TranslatedSecondOrder translated_second_order(const BodySpec& inner, const Vector& p,
                                              const Vector& v) {
  const TranslatedRoot r = solve_translated(inner, p, v);
  const GaugeJet jin = gauge_jet(inner, r.rho);  // analytic: inner is quartic

  TranslatedSecondOrder out;
  out.F = r.F;
  out.rho = r.rho;

  const double denom = 1.0 - p.dot(jin.dL);
  if (!(denom > 0.0)) throw Error("translated gauge: boundary-point denominator is not positive");
  out.dF = jin.dL / denom;

  // Hessian of the inner gauge itself (not of its energy) at rho.
  const Matrix Hl = (jin.g - jin.dL * jin.dL.transpose()) / jin.L;
  const Vector Hp = Hl * p;
  const double pHp = p.dot(Hp);
  const double F = r.F;
  Matrix Fyy = (Hl / F + (Hp * out.dF.transpose() + out.dF * Hp.transpose()) / F +
                (pHp / F) * out.dF * out.dF.transpose()) /
               denom;
  out.g = out.dF * out.dF.transpose() + F * Fyy;
  return out;
}

GaugeJet translated_hybrid_jet(const BodySpec& c, const Vector& v) {
  const BodySpec& inner = c.inner();
  const Vector& p = c.shift();
  const int n = static_cast<int>(v.size());

  const TranslatedSecondOrder main = translated_second_order(inner, p, v);

  GaugeJet j;
  j.point = v;
  j.L = main.F;
  j.dL = main.dF;
  j.g = main.g;

  // Cartan coefficients by differencing the semi-analytic metric; the metric
  // is roundoff-accurate, so a mid-sized step keeps both error terms small.
  const double sigma = 2e-4 * fd::scale_of(v);
  std::vector<Matrix> dg(n);
  for (int k = 0; k < n; ++k) {
    Vector a = v, b = v;
    a[k] += sigma;
    b[k] -= sigma;
    dg[k] = (translated_second_order(inner, p, a).g - translated_second_order(inner, p, b).g) /
            (2.0 * sigma);
  }
  j.C3 = Tensor3(n);
  for (int i = 0; i < n; ++i)
    for (int jj = 0; jj < n; ++jj)
      for (int k = 0; k < n; ++k)
        // raw value 0.5 * dg_ij/dy_k, symmetrized over the differencing slot
        j.C3(i, jj, k) = (0.5 / 3.0) * (dg[k](i, jj) + dg[i](jj, k) + dg[jj](k, i));
  j.derivative_mode = DerivativeMode::finite_difference;
  return j;
}

GaugeJet fd_jet(const BodySpec& c, const Vector& v, const FdOptions& opts) {
  const double scale = fd::scale_of(v);
  const auto E = [&](const Vector& w) {
    const double L = evaluate_gauge(c, w);
    return 0.5 * L * L;
  };
  GaugeJet j;
  j.point = v;
  j.L = evaluate_gauge(c, v);
  const Vector dE = fd::gradient(E, v, scale * fd::kCbrtEps, opts.richardson);
  j.dL = dE / j.L;
  j.g = fd::hessian(E, v, scale * fd::kCbrtEps, opts.richardson);
  j.C3 = fd::third(E, v, scale * fd::kThirdStep, opts.richardson);
  for (int i = 0; i < j.C3.dim(); ++i)
    for (int jj = 0; jj < j.C3.dim(); ++jj)
      for (int k = 0; k < j.C3.dim(); ++k) j.C3(i, jj, k) *= 0.5;
  j.derivative_mode = DerivativeMode::finite_difference;
  return j;
}

}  // namespace

GaugeJet gauge_jet(const BodySpec& spec, const Vector& v) {
  require_arg_size(v, spec.dimension(), "gauge_jet");
  if (v.isZero(0.0)) throw ZeroVector("gauge_jet: zero vector");
  const BodySpec& c = spec.canonical();
  GaugeJet j;
  switch (c.family()) {
    case Family::ellipsoid: j = ellipsoid_jet(c, v); break;
    case Family::randers: j = randers_jet(c, v); break;
    case Family::quartic: j = quartic_jet(c, v); break;
    case Family::translated: j = translated_hybrid_jet(c, v); break;
    default: throw std::logic_error("gauge_jet: unknown family");
  }
  enforce_definiteness(j.g, v);
  return j;
}

GaugeJet gauge_jet(const BodySpec& spec, const Vector& v, DerivativeMode mode,
                   const FdOptions& opts) {
  if (mode == DerivativeMode::analytic) return gauge_jet(spec, v);
  require_arg_size(v, spec.dimension(), "gauge_jet");
  if (v.isZero(0.0)) throw ZeroVector("gauge_jet: zero vector");
  GaugeJet j = fd_jet(spec.canonical(), v, opts);
  enforce_definiteness(j.g, v);
  return j;
}

Vector cartan_trace(const GaugeJet& jet) {
  const int n = static_cast<int>(jet.g.rows());
  const Matrix ginv = metric_inverse(jet.g);
  Vector C(n);
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) acc += ginv(j, k) * jet.C3(i, j, k);
    C[i] = acc;
  }
  return C;
}

Tensor4 q_curvature(const GaugeJet& jet) {
  const int n = static_cast<int>(jet.g.rows());
  const Matrix ginv = metric_inverse(jet.g);
  Tensor3 Cu(n);  // Cu(l, i, j) = C^l_ij
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double acc = 0.0;
        for (int m = 0; m < n; ++m) acc += ginv(l, m) * jet.C3(i, j, m);
        Cu(l, i, j) = acc;
      }
  Tensor4 Q(n);
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          double acc = 0.0;
          for (int s = 0; s < n; ++s)
            acc += Cu(l, s, k) * Cu(s, i, j) - Cu(l, s, j) * Cu(s, i, k);
          Q(l, i, j, k) = acc;
        }
  return Q;
}

ValidationReport validate_spec(const BodySpec& spec, int samples) {
  // analytic mode means "the family's best jet path" (translated specs fall
  // back to their semi-analytic hybrid internally)
  return validate_spec(spec, samples, DerivativeMode::analytic);
}

ValidationReport validate_spec(const BodySpec& spec, int samples, DerivativeMode mode) {
  if (samples < 1) throw std::invalid_argument("validate_spec: samples must be >= 1");
  const int n = spec.dimension();
  static const double kScales[] = {0.5, 2.0, 7.3};
  ValidationReport rep;
  rep.samples = samples;
  rep.min_eigenvalue = std::numeric_limits<double>::infinity();
  rep.min_eigenvalue_ratio = std::numeric_limits<double>::infinity();
  bool any_jet = false;

  const auto record_failure = [&](const Vector& u, const std::string& why) {
    if (!rep.failure_point) {
      rep.failure_point = u;
      rep.failure_reason = why;
    }
  };

  for (int s = 0; s < samples; ++s) {
    const Vector u = halton_sphere_point(static_cast<std::uint64_t>(s), n);
    double L = 0.0;
    try {
      L = evaluate_gauge(spec, u);
    } catch (const Error& e) {
      record_failure(u, std::string("gauge evaluation failed: ") + e.what());
      continue;
    }
    if (!(std::isfinite(L) && L > 0.0)) {
      record_failure(u, "gauge is not finite and positive");
      continue;
    }
    for (double t : kScales) {
      const double Lt = evaluate_gauge(spec, t * u);
      const double rel = std::abs(Lt - t * L) / (t * L);
      rep.max_homogeneity_error = std::max(rep.max_homogeneity_error, rel);
      if (rel > 1e-10) record_failure(u, "homogeneity violated at t = " + fmt(t));
    }
    try {
      const GaugeJet jet = (mode == DerivativeMode::analytic) ? gauge_jet(spec, u)
                                                              : gauge_jet(spec, u, mode);
      Eigen::SelfAdjointEigenSolver<Matrix> es(jet.g, Eigen::EigenvaluesOnly);
      const double lo = es.eigenvalues().minCoeff();
      const double hi = es.eigenvalues().maxCoeff();
      rep.min_eigenvalue = std::min(rep.min_eigenvalue, lo);
      rep.min_eigenvalue_ratio = std::min(rep.min_eigenvalue_ratio, lo / hi);
      any_jet = true;
    } catch (const Error& e) {
      record_failure(u, std::string("metric check failed: ") + e.what());
    }
  }
  if (!any_jet) {
    rep.min_eigenvalue = 0.0;
    rep.min_eigenvalue_ratio = 0.0;
  }
  rep.passed = !rep.failure_point.has_value();
  return rep;
}

}  // namespace mlab
