#include "mlab/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <ostream>
#include <string>

#include "mlab/finite_diff.hpp"
#include "mlab/numerics.hpp"

namespace mlab {

const char* rule_kind_name(RuleKind kind) {
  switch (kind) {
    case RuleKind::trapezoid2d: return "trapezoid2d";
    case RuleKind::gauss_product3d: return "gauss_product3d";
    case RuleKind::montecarlo: return "montecarlo";
    case RuleKind::qmc: return "qmc";
  }
  return "?";
}

std::optional<RuleKind> parse_rule_kind(std::string_view name) {
  if (name == "trapezoid2d") return RuleKind::trapezoid2d;
  if (name == "gauss_product3d") return RuleKind::gauss_product3d;
  if (name == "montecarlo") return RuleKind::montecarlo;
  if (name == "qmc") return RuleKind::qmc;
  return std::nullopt;
}

SphereRule build_rule(int n, RuleKind kind, int node_count, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("build_rule: dimension must be >= 2");
  if (node_count < 4) throw std::invalid_argument("build_rule: node_count must be >= 4");

  SphereRule rule;
  rule.dimension = n;
  rule.kind = kind;
  rule.seed = seed;

  using std::numbers::pi;
  switch (kind) {
    case RuleKind::trapezoid2d: {
      if (n != 2) throw UnsupportedKind("trapezoid2d requires dimension 2");
      const double w = 2.0 * pi / node_count;
      rule.nodes.reserve(node_count);
      for (int k = 0; k < node_count; ++k) {
        const double t = w * k;
        Vector u(2);
        u << std::cos(t), std::sin(t);
        rule.nodes.push_back(u);
        rule.weights.push_back(w);
      }
      break;
    }
    case RuleKind::gauss_product3d: {
      if (n != 3) throw UnsupportedKind("gauss_product3d requires dimension 3");
      // nearest N_theta x (2 N_theta) grid: 512 -> 16x32, 2048 -> 32x64
      const int nt = std::max(2, static_cast<int>(std::lround(std::sqrt(node_count / 2.0))));
      const int np = 2 * nt;
      std::vector<double> x, w;
      gauss_legendre(nt, x, w);  // cos(theta) on [-1, 1]
      const double wphi = 2.0 * pi / np;
      for (int i = 0; i < nt; ++i) {
        const double c = x[i];
        const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
        for (int j = 0; j < np; ++j) {
          const double phi = wphi * j;
          Vector u(3);
          u << s * std::cos(phi), s * std::sin(phi), c;
          rule.nodes.push_back(u);
          rule.weights.push_back(w[i] * wphi);
        }
      }
      break;
    }
    case RuleKind::montecarlo: {
      const double w = sphere_surface_area(n) / node_count;
      GaussianSampler sampler(seed);
      for (int k = 0; k < node_count; ++k) {
        rule.nodes.push_back(sampler.direction(n));
        rule.weights.push_back(w);
      }
      break;
    }
    case RuleKind::qmc: {
      const double w = sphere_surface_area(n) / node_count;
      for (int k = 0; k < node_count; ++k) {
        rule.nodes.push_back(halton_sphere_point(static_cast<std::uint64_t>(k), n));
        rule.weights.push_back(w);
      }
      break;
    }
  }
  return rule;
}

namespace {

void spot_check_homogeneity(const ScalarField& f, const SphereRule& rule) {
  const int N = rule.node_count();
  const int picks[3] = {0, N / 3, (2 * N) / 3};
  for (int idx : picks) {
    const Vector& u = rule.nodes[idx];
    const double f1 = f(u);
    const double f2 = f(2.0 * u);
    if (std::abs(f2 - f1) > 1e-8 * (1.0 + std::abs(f1)))
      throw NotHomogeneous("integrand is not zero-homogeneous at a rule node");
  }
}

/// Pullback density phi^n sqrt(det g) at a sphere node.
double measure_factor(const BodySpec& spec, const Vector& u, int n) {
  const GaugeJet jet = gauge_jet(spec, u);
  const double detg = jet.g.determinant();
  if (!(detg > 0.0) || !std::isfinite(detg))
    throw NonFiniteIntegrand("metric determinant is not finite and positive at a node");
  return std::pow(jet.L, -n) * std::sqrt(detg);
}

}  // namespace

IndicatrixIntegral integrate_indicatrix(const BodySpec& spec, const ScalarField& f,
                                        const SphereRule& rule) {
  if (rule.dimension != spec.dimension())
    throw std::invalid_argument("integrate_indicatrix: rule dimension mismatch");
  spot_check_homogeneity(f, rule);

  const int n = rule.dimension;
  const int N = rule.node_count();
  std::vector<double> samples(N);  // phi^n f sqrt(det g) per node
  std::vector<double> terms(N);
  for (int k = 0; k < N; ++k) {
    const Vector& u = rule.nodes[k];
    const double fu = f(u);
    if (!std::isfinite(fu)) throw NonFiniteIntegrand("integrand is not finite at a node");
    samples[k] = fu * measure_factor(spec, u, n);
    terms[k] = rule.weights[k] * samples[k];
  }

  IndicatrixIntegral out;
  out.kind = rule.kind;
  out.node_count = N;
  out.value = pairwise_sum(terms);
  if (!rule.deterministic()) {
    const double mean = pairwise_sum(samples) / N;
    std::vector<double> sq(N);
    for (int k = 0; k < N; ++k) sq[k] = (samples[k] - mean) * (samples[k] - mean);
    const double var = pairwise_sum(sq) / std::max(1, N - 1);
    out.standard_error = sphere_surface_area(n) * std::sqrt(var / N);
  }
  return out;
}

double verify_jacobian_lemma(const BodySpec& spec, const Vector& v) {
  if (v.isZero(0.0)) throw ZeroVector("verify_jacobian_lemma: zero vector");
  const int n = spec.dimension();
  const auto T = [&](const Vector& w) -> Vector {
    return (w.norm() / evaluate_gauge(spec, w)) * w;
  };
  const double h = fd::kCbrtEps * fd::scale_of(v);
  Matrix J(n, n);
  for (int j = 0; j < n; ++j) {
    Vector a = v, b = v;
    a[j] += h;
    b[j] -= h;
    J.col(j) = (T(a) - T(b)) / (2.0 * h);
  }
  const double phi = v.norm() / evaluate_gauge(spec, v);
  const double expected = std::pow(phi, n);
  return std::abs(J.determinant() - expected) / expected;
}

std::pair<double, double> verify_divergence_identity(const BodySpec& spec, const ScalarField& f,
                                                     const SphereRule& rule) {
  const double rhs = integrate_indicatrix(spec, f, rule).value / rule.dimension;

  const int n = rule.dimension;
  std::vector<double> rx, rw;
  gauss_legendre(64, rx, rw);
  const int N = rule.node_count();
  std::vector<double> terms(N);
  for (int k = 0; k < N; ++k) {
    const Vector& u = rule.nodes[k];
    const double R = 1.0 / evaluate_gauge(spec, u);  // radius of K along u
    double ray = 0.0;
    for (size_t q = 0; q < rx.size(); ++q) {
      const double r = 0.5 * R * (rx[q] + 1.0);
      const Vector x = r * u;
      const double fx = f(x);
      const GaugeJet jet = gauge_jet(spec, x);
      const double detg = jet.g.determinant();
      if (!(detg > 0.0) || !std::isfinite(fx))
        throw NonFiniteIntegrand("integrand is not finite inside the body");
      ray += rw[q] * std::pow(r, n - 1) * fx * std::sqrt(detg);
    }
    terms[k] = rule.weights[k] * 0.5 * R * ray;
  }
  const double lhs = pairwise_sum(terms);
  return {lhs, rhs};
}

void write_rule_csv(const SphereRule& rule, std::ostream& os) {
  os << "# sphere rule: kind=" << rule_kind_name(rule.kind) << " dimension=" << rule.dimension
     << " nodes=" << rule.node_count() << "\n";
  for (int k = 0; k < rule.dimension; ++k) os << "x" << k + 1 << ",";
  os << "weight\n";
  char buf[64];
  for (int k = 0; k < rule.node_count(); ++k) {
    for (int i = 0; i < rule.dimension; ++i) {
      std::snprintf(buf, sizeof buf, "%.17g,", rule.nodes[k][i]);
      os << buf;
    }
    std::snprintf(buf, sizeof buf, "%.17g\n", rule.weights[k]);
    os << buf;
  }
}

}  // namespace mlab
