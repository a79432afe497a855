#include "mlab/averaging.hpp"

#include <cmath>

#include "mlab/numerics.hpp"

namespace mlab {

namespace {

Matrix spd_inverse_or_throw(const Matrix& M, const char* name) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(M);
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().maxCoeff();
  if (!(lo > 0.0) || lo <= 1e-12 * hi)
    throw SingularGamma(std::string(name) + " failed its positive-definiteness check");
  return es.eigenvectors() * es.eigenvalues().cwiseInverse().asDiagonal() *
         es.eigenvectors().transpose();
}

}  // namespace

AveragedReport averaged_report(const BodySpec& spec, const SphereRule& rule) {
  const int n = spec.dimension();
  if (rule.dimension != n) throw std::invalid_argument("averaged_report: rule dimension mismatch");
  const int N = rule.node_count();

  // per-node samples (the phi^n sqrt(det g) density times the integrand),
  // kept whole so both the pairwise sums and the standard errors are exact
  std::vector<double> s_area(N);
  std::vector<std::vector<double>> s_g1(n * n, std::vector<double>(N));
  std::vector<std::vector<double>> s_g3(n * n, std::vector<double>(N));
  std::vector<std::vector<double>> s_beta(n, std::vector<double>(N));

  for (int k = 0; k < N; ++k) {
    const Vector& u = rule.nodes[k];
    const GaugeJet jet = gauge_jet(spec, u);
    const double detg = jet.g.determinant();
    if (!(detg > 0.0) || !std::isfinite(detg))
      throw NonFiniteIntegrand("metric determinant is not finite and positive at a node");
    const double density = std::pow(jet.L, -n) * std::sqrt(detg);
    s_area[k] = density;
    for (int i = 0; i < n; ++i) {
      s_beta[i][k] = density * jet.dL[i];
      for (int j = 0; j < n; ++j) {
        s_g1[i * n + j][k] = density * jet.g(i, j);
        s_g3[i * n + j][k] = density * jet.dL[i] * jet.dL[j];
      }
    }
  }

  const auto integrate = [&](const std::vector<double>& s) {
    std::vector<double> terms(N);
    for (int k = 0; k < N; ++k) terms[k] = rule.weights[k] * s[k];
    return pairwise_sum(terms);
  };
  const auto standard_error = [&](const std::vector<double>& s) {
    const double mean = pairwise_sum(s) / N;
    std::vector<double> sq(N);
    for (int k = 0; k < N; ++k) sq[k] = (s[k] - mean) * (s[k] - mean);
    const double var = pairwise_sum(sq) / std::max(1, N - 1);
    return sphere_surface_area(n) * std::sqrt(var / N);
  };

  AveragedReport rep;
  rep.rule_kind = rule.kind;
  rep.node_count = N;
  rep.area = integrate(s_area);
  rep.beta = Vector(n);
  rep.gamma1 = Matrix(n, n);
  rep.gamma3 = Matrix(n, n);
  for (int i = 0; i < n; ++i) {
    rep.beta[i] = integrate(s_beta[i]);
    for (int j = 0; j < n; ++j) {
      rep.gamma1(i, j) = integrate(s_g1[i * n + j]);
      rep.gamma3(i, j) = integrate(s_g3[i * n + j]);
    }
  }
  rep.gamma1 = (0.5 * (rep.gamma1 + rep.gamma1.transpose())).eval();
  rep.gamma3 = (0.5 * (rep.gamma3 + rep.gamma3.transpose())).eval();
  rep.gamma2 = rep.gamma1 - rep.gamma3;

  if (!(rep.area > 0.0)) throw NonFiniteIntegrand("indicatrix area is not positive");
  rep.Gamma1 = rep.gamma1 / rep.area;
  rep.Gamma2 = rep.gamma2 / rep.area;
  rep.Gamma3 = rep.gamma3 / rep.area;

  const Matrix G1inv = spd_inverse_or_throw(rep.Gamma1, "Gamma1");
  const Matrix G3inv = spd_inverse_or_throw(rep.Gamma3, "Gamma3");
  rep.beta_sup_norm_G1 = std::sqrt(std::max(0.0, rep.beta.dot(G1inv * rep.beta))) / rep.area;
  rep.beta_sup_norm_G3 = std::sqrt(std::max(0.0, rep.beta.dot(G3inv * rep.beta))) / rep.area;
  rep.balanced = rep.beta.cwiseAbs().maxCoeff() <= kBalanceTolerance * rep.area;

  if (!rule.deterministic()) {
    AveragedReport::StandardErrors se;
    se.area = standard_error(s_area);
    se.beta = Vector(n);
    se.gamma1 = Matrix(n, n);
    se.gamma3 = Matrix(n, n);
    for (int i = 0; i < n; ++i) {
      se.beta[i] = standard_error(s_beta[i]);
      for (int j = 0; j < n; ++j) {
        se.gamma1(i, j) = standard_error(s_g1[i * n + j]);
        se.gamma3(i, j) = standard_error(s_g3[i * n + j]);
      }
    }
    rep.standard_errors = std::move(se);
  }
  return rep;
}

double remark1_identity_residual(const BodySpec& spec, const Vector& v, const SphereRule& rule) {
  const int n = spec.dimension();
  if (rule.dimension != n) throw std::invalid_argument("remark1: rule dimension mismatch");
  const int N = rule.node_count();

  // integrands L * C_i (zero-homogeneous extension of the Cartan trace) and
  // dL_i, accumulated in the same pass
  std::vector<std::vector<double>> s_lc(n, std::vector<double>(N));
  std::vector<std::vector<double>> s_beta(n, std::vector<double>(N));
  for (int k = 0; k < N; ++k) {
    const Vector& u = rule.nodes[k];
    const GaugeJet jet = gauge_jet(spec, u);
    const double density = std::pow(jet.L, -n) * std::sqrt(jet.g.determinant());
    const Vector C = cartan_trace(jet);
    for (int i = 0; i < n; ++i) {
      s_lc[i][k] = density * jet.L * C[i];
      s_beta[i][k] = density * jet.dL[i];
    }
  }
  const auto integrate = [&](const std::vector<double>& s) {
    std::vector<double> terms(N);
    for (int k = 0; k < N; ++k) terms[k] = rule.weights[k] * s[k];
    return pairwise_sum(terms);
  };
  double lhs = 0.0, betav = 0.0;
  for (int i = 0; i < n; ++i) {
    lhs += v[i] * integrate(s_lc[i]);
    betav += v[i] * integrate(s_beta[i]);
  }
  const double rhs = (n - 1) * betav;
  return std::abs(lhs - rhs) / (1.0 + std::abs(rhs));
}

double RandersFunctional::operator()(const Vector& v) const {
  return std::sqrt(v.dot(base_metric * v)) + one_form.dot(v);
}

BodySpec RandersFunctional::to_body_spec() const {
  return BodySpec::randers(base_metric, one_form);
}

RandersFunctional make_randers(const AveragedReport& report, RandersWhich which) {
  RandersFunctional f;
  f.which = which;
  f.base_metric = (which == RandersWhich::F1) ? report.Gamma1 : report.Gamma3;
  f.one_form = report.beta / report.area;
  const double sup =
      (which == RandersWhich::F1) ? report.beta_sup_norm_G1 : report.beta_sup_norm_G3;
  if (!(sup < 1.0))
    throw NotAFinslerNorm("averaged one-form reaches norm >= 1 in its base metric");
  return f;
}

double isometry_invariance_check(const BodySpec& spec, const Matrix& Phi, const SphereRule& rule) {
  const int n = spec.dimension();
  if (Phi.rows() != n || Phi.cols() != n)
    throw std::invalid_argument("isometry_invariance_check: matrix size mismatch");
  for (int k = 0; k < 8; ++k) {
    const Vector u = halton_sphere_point(static_cast<std::uint64_t>(k), n);
    const double a = evaluate_gauge(spec, u);
    const double b = evaluate_gauge(spec, Phi * u);
    if (std::abs(a - b) > 1e-10 * a)
      throw NotAnIsometry("map does not preserve the gauge at a spot-check point");
  }
  const AveragedReport rep = averaged_report(spec, rule);
  const auto defect = [&](const Matrix& M) {
    return (Phi.transpose() * M * Phi - M).norm() / M.norm();
  };
  double worst = std::max({defect(rep.gamma1), defect(rep.gamma2), defect(rep.gamma3)});
  worst = std::max(worst, (Phi.transpose() * rep.beta - rep.beta).norm() / rep.area);
  return worst;
}

std::pair<double, double> lambda_estimate(const AveragedReport& report) {
  const double denom = report.gamma1.squaredNorm();
  const double lambda = (report.gamma2.array() * report.gamma1.array()).sum() / denom;
  const double resid = (report.gamma2 - lambda * report.gamma1).norm() / report.gamma2.norm();
  return {lambda, resid};
}

}  // namespace mlab
