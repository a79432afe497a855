#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mlab/area.hpp"
#include "mlab/averaging.hpp"
#include "mlab/bodies.hpp"
#include "mlab/funk.hpp"
#include "mlab/io.hpp"
#include "mlab/numerics.hpp"
#include "mlab/quadrature.hpp"

namespace {

using namespace mlab;

constexpr int kExitOk = 0;
constexpr int kExitToleranceFailure = 1;
constexpr int kExitBadSpec = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitIo = 4;

struct CommonOptions {
  std::string spec_path;
  std::string rule_name;
  int nodes = 0;
  std::uint64_t seed = 0;
  std::string out_dir = ".";
  std::vector<std::string> tol;
  int samples = 0;
  int grid = 21;
};

void add_common(CLI::App* cmd, CommonOptions& opt) {
  cmd->add_option("--spec", opt.spec_path, "body description JSON file")->required();
  cmd->add_option("--rule", opt.rule_name,
                  "trapezoid2d|gauss_product3d|montecarlo|qmc (default chosen by dimension)");
  cmd->add_option("--nodes", opt.nodes, "quadrature node count (default chosen by rule)");
  cmd->add_option("--seed", opt.seed, "random seed (montecarlo rules and sampling)");
  cmd->add_option("--out", opt.out_dir, "output directory (default: current)");
  cmd->add_option("--tol", opt.tol, "tolerance override NAME=VALUE (repeatable)");
}

/// Effective tolerances: defaults overlaid with --tol overrides; unknown
/// names are a configuration error.
std::map<std::string, double> resolve_tolerances(const std::map<std::string, double>& defaults,
                                                 const std::vector<std::string>& overrides,
                                                 std::vector<std::string>& overridden) {
  std::map<std::string, double> out = defaults;
  for (const std::string& item : overrides) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw InvalidSpec("--tol expects NAME=VALUE, got: " + item);
    const std::string name = item.substr(0, eq);
    if (!out.count(name)) throw InvalidSpec("unknown tolerance name: " + name);
    double value = 0.0;
    try {
      value = std::stod(item.substr(eq + 1));
    } catch (const std::exception&) {
      throw InvalidSpec("--tol value is not a number: " + item);
    }
    if (!(value > 0.0)) throw InvalidSpec("tolerances must be positive: " + item);
    out[name] = value;
    overridden.push_back(name);
  }
  return out;
}

SphereRule make_rule(const CommonOptions& opt, int dimension) {
  RuleKind kind;
  if (opt.rule_name.empty()) {
    kind = dimension == 2   ? RuleKind::trapezoid2d
           : dimension == 3 ? RuleKind::gauss_product3d
                            : RuleKind::qmc;
  } else {
    const auto parsed = parse_rule_kind(opt.rule_name);
    if (!parsed) throw InvalidSpec("unknown rule kind: " + opt.rule_name);
    kind = *parsed;
  }
  int nodes = opt.nodes;
  if (nodes == 0) {
    switch (kind) {
      case RuleKind::trapezoid2d: nodes = 256; break;
      case RuleKind::gauss_product3d: nodes = 2048; break;
      default: nodes = 4096; break;
    }
  }
  return build_rule(dimension, kind, nodes, opt.seed);
}

json make_metadata(const CommonOptions& opt, const BodySpec& spec, const SphereRule& rule,
                   const std::map<std::string, double>& tolerances,
                   const std::vector<std::string>& overridden) {
  json m;
  m["spec_file"] = opt.spec_path;
  m["body"] = body_spec_to_json(spec);
  m["rule"] = rule_kind_name(rule.kind);
  m["nodes"] = rule.node_count();
  m["seed"] = opt.seed;
  if (!tolerances.empty()) {
    json t;
    for (const auto& [name, value] : tolerances) t[name] = value;
    m["tolerances"] = std::move(t);
    m["tolerance_overrides"] = overridden;
  }
  return m;
}

BodySpec load_validated_spec(const CommonOptions& opt, ValidationReport& validation) {
  BodySpec spec = load_body_spec(opt.spec_path);
  validation = validate_spec(spec, 64);
  if (!validation.passed) {
    std::cerr << "spec failed validation: " << validation.failure_reason << "\n";
    throw InvalidSpec("body description failed its smoothness/convexity validation");
  }
  return spec;
}

json validation_to_json(const ValidationReport& v) {
  json j;
  j["passed"] = v.passed;
  j["samples"] = v.samples;
  j["max_homogeneity_error"] = v.max_homogeneity_error;
  j["min_eigenvalue"] = v.min_eigenvalue;
  j["min_eigenvalue_ratio"] = v.min_eigenvalue_ratio;
  return j;
}

std::string output_path(const CommonOptions& opt, const std::string& name) {
  try {
    std::filesystem::create_directories(opt.out_dir);
  } catch (const std::filesystem::filesystem_error& e) {
    throw IoFailure(std::string("cannot create output directory: ") + e.what());
  }
  return (std::filesystem::path(opt.out_dir) / name).string();
}

int cmd_analyze(CommonOptions& opt) {
  std::vector<std::string> overridden;
  const auto tols = resolve_tolerances({}, opt.tol, overridden);
  ValidationReport validation;
  const BodySpec spec = load_validated_spec(opt, validation);
  const SphereRule rule = make_rule(opt, spec.dimension());
  const AveragedReport rep = averaged_report(spec, rule);
  const auto [lambda, lambda_residual] = lambda_estimate(rep);

  json doc;
  doc["schema_version"] = 1;
  doc["command"] = "analyze";
  doc["metadata"] = make_metadata(opt, spec, rule, tols, overridden);
  doc["validation"] = validation_to_json(validation);
  doc["report"] = averaged_report_to_json(rep);
  json lam;
  lam["value"] = lambda;
  lam["fit_residual"] = lambda_residual;
  doc["lambda"] = std::move(lam);
  write_text_file(output_path(opt, "analyze_report.json"), doc.dump(2) + "\n");

  std::cout << "area:               " << format_double(rep.area) << "\n";
  std::cout << "balanced:           " << (rep.balanced ? "true" : "false")
            << "  (max|beta|/area = "
            << format_double(rep.beta.cwiseAbs().maxCoeff() / rep.area) << ")\n";
  std::cout << "beta:              ";
  for (int i = 0; i < rep.beta.size(); ++i) std::cout << " " << format_double(rep.beta[i]);
  std::cout << "\n";
  std::cout << "sup norms:          Gamma1 " << format_double(rep.beta_sup_norm_G1) << ", Gamma3 "
            << format_double(rep.beta_sup_norm_G3) << "\n";
  std::cout << "lambda estimate:    " << format_double(lambda) << "  (fit residual "
            << format_double(lambda_residual) << ")\n";
  std::cout << "report: " << output_path(opt, "analyze_report.json") << "\n";
  return kExitOk;
}

int cmd_funk_checks(CommonOptions& opt) {
  std::vector<std::string> overridden;
  const auto tols = resolve_tolerances(
      {{"okada", 1e-6}, {"conformal", 1e-6}, {"curvature", 1e-4}, {"jacobian", 1e-6}}, opt.tol,
      overridden);
  ValidationReport validation;
  const BodySpec spec = load_validated_spec(opt, validation);
  const int n = spec.dimension();
  const SphereRule rule = make_rule(opt, n);  // recorded in metadata for provenance
  const int samples = opt.samples > 0 ? opt.samples : 100;

  GaussianSampler rng(opt.seed);
  const Vector X = Vector::Unit(n, 0);
  const Vector Y = Vector::Unit(n, 1);

  std::ostringstream csv;
  csv << "sample,okada,conformal_factor,conformal_deviation,curvature,jacobian\n";
  double max_okada = 0.0, max_conformal = 0.0, max_curvature = 0.0, max_jacobian = 0.0;
  double min_factor = std::numeric_limits<double>::infinity();
  for (int k = 0; k < samples; ++k) {
    const Vector up = rng.direction(n);
    const double radial = rng.uniform01();  // L(p) = 0.9 * radial <= 0.9
    const Vector p = (0.9 * radial / evaluate_gauge(spec, up)) * up;
    const Vector v = rng.direction(n);
    const Vector w = (0.5 + rng.uniform01()) * rng.direction(n);

    const double okada = okada_residual(spec, p, v).cwiseAbs().maxCoeff();
    const auto [factor, conformal] = conformal_factor_check(spec, p, v);
    const double curvature = curvature_check(spec, p, v, X, Y);
    const double jacobian = verify_jacobian_lemma(spec, w);

    max_okada = std::max(max_okada, okada);
    max_conformal = std::max(max_conformal, conformal);
    max_curvature = std::max(max_curvature, curvature);
    max_jacobian = std::max(max_jacobian, jacobian);
    min_factor = std::min(min_factor, factor);

    char line[256];
    std::snprintf(line, sizeof line, "%d,%.17g,%.17g,%.17g,%.17g,%.17g\n", k, okada, factor,
                  conformal, curvature, jacobian);
    csv << line;
  }
  char line[256];
  std::snprintf(line, sizeof line, "max,%.17g,%.17g,%.17g,%.17g,%.17g\n", max_okada, min_factor,
                max_conformal, max_curvature, max_jacobian);
  csv << line;  // the factor column of the max row carries the minimum
  write_text_file(output_path(opt, "funk_checks.csv"), csv.str());

  const bool ok = max_okada <= tols.at("okada") && max_conformal <= tols.at("conformal") &&
                  max_curvature <= tols.at("curvature") && max_jacobian <= tols.at("jacobian") &&
                  min_factor > 0.0;
  std::cout << "okada max:       " << format_double(max_okada) << "  (tol "
            << format_double(tols.at("okada")) << ")\n";
  std::cout << "conformal max:   " << format_double(max_conformal) << "  (tol "
            << format_double(tols.at("conformal")) << ")\n";
  std::cout << "factor min:      " << format_double(min_factor) << "  (must be > 0)\n";
  std::cout << "curvature max:   " << format_double(max_curvature) << "  (tol "
            << format_double(tols.at("curvature")) << ")\n";
  std::cout << "jacobian max:    " << format_double(max_jacobian) << "  (tol "
            << format_double(tols.at("jacobian")) << ")\n";
  std::cout << "table: " << output_path(opt, "funk_checks.csv") << "\n";
  std::cout << (ok ? "all residuals within tolerance\n" : "TOLERANCE EXCEEDED\n");
  return ok ? kExitOk : kExitToleranceFailure;
}

int cmd_area_map(CommonOptions& opt) {
  std::vector<std::string> overridden;
  const auto tols = resolve_tolerances({}, opt.tol, overridden);
  ValidationReport validation;
  const BodySpec spec = load_validated_spec(opt, validation);
  const SphereRule rule = make_rule(opt, spec.dimension());
  AreaField field(spec, rule);

  const std::vector<AreaGridRow> rows = area_grid(field, opt.grid);
  std::ostringstream csv;
  write_area_grid_csv(rows, spec.dimension(), csv);
  write_text_file(output_path(opt, "area_grid.csv"), csv.str());

  const MinimizeResult min = minimize_area(field);
  double min_eig = std::numeric_limits<double>::infinity();
  for (const auto& row : rows) min_eig = std::min(min_eig, row.hessian_min_eigenvalue);

  json doc;
  doc["schema_version"] = 1;
  doc["command"] = "area-map";
  doc["metadata"] = make_metadata(opt, spec, rule, tols, overridden);
  doc["validation"] = validation_to_json(validation);
  json grid;
  grid["resolution"] = opt.grid;
  grid["rows"] = static_cast<int>(rows.size());
  grid["bounds_satisfied"] = true;  // a violation would have thrown
  grid["min_hessian_eigenvalue"] = min_eig;
  doc["grid"] = std::move(grid);
  json minimizer;
  minimizer["p"] = vector_to_json(min.p);
  minimizer["r"] = min.r;
  minimizer["gradient_norm"] = min.gradient_norm;
  minimizer["iterations"] = min.iterations;
  doc["minimizer"] = std::move(minimizer);
  write_text_file(output_path(opt, "area_minimizer.json"), doc.dump(2) + "\n");

  std::cout << "grid rows:          " << rows.size() << " (resolution " << opt.grid << ")\n";
  std::cout << "bounds sandwich:    satisfied at every grid point\n";
  std::cout << "min Hessian eig:    " << format_double(min_eig) << "\n";
  std::cout << "minimizer p:       ";
  for (int i = 0; i < min.p.size(); ++i) std::cout << " " << format_double(min.p[i]);
  std::cout << "\n";
  std::cout << "minimum area:       " << format_double(min.r) << "\n";
  std::cout << "files: " << output_path(opt, "area_grid.csv") << ", "
            << output_path(opt, "area_minimizer.json") << "\n";
  return kExitOk;
}

int cmd_brickell(CommonOptions& opt) {
  std::vector<std::string> overridden;
  const auto tols = resolve_tolerances({}, opt.tol, overridden);
  ValidationReport validation;
  const BodySpec spec = load_validated_spec(opt, validation);
  const SphereRule rule = make_rule(opt, spec.dimension());
  const int samples = opt.samples > 0 ? opt.samples : 50;

  const BrickellReport rep = brickell_diagnostic(spec, rule, samples);

  json doc;
  doc["schema_version"] = 1;
  doc["command"] = "brickell";
  doc["metadata"] = make_metadata(opt, spec, rule, tols, overridden);
  doc["validation"] = validation_to_json(validation);
  doc["report"] = brickell_report_to_json(rep);
  write_text_file(output_path(opt, "brickell_report.json"), doc.dump(2) + "\n");

  std::cout << "q_norm:             " << format_double(rep.q_norm) << "\n";
  std::cout << "balanced:           " << (rep.balanced ? "true" : "false") << "\n";
  std::cout << "ellipsoid residual: " << format_double(rep.ellipsoid_residual) << "\n";
  if (!rep.warning.empty()) std::cout << "warning:            " << rep.warning << "\n";
  std::cout << "verdict:            " << rep.verdict << "\n";
  std::cout << "report: " << output_path(opt, "brickell_report.json") << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mlab — numerical laboratory for Minkowski gauges and their Funk spaces"};
  app.require_subcommand(1);

  CommonOptions opt;
  CLI::App* analyze = app.add_subcommand("analyze", "averaged metrics, beta, balancedness");
  add_common(analyze, opt);
  CLI::App* funk = app.add_subcommand("funk-checks",
                                      "Okada / conformal / curvature / Jacobian residual table");
  add_common(funk, opt);
  funk->add_option("--samples", opt.samples, "number of sampled (p, v) pairs (default 100)");
  CLI::App* areamap = app.add_subcommand("area-map", "area grid with bounds and minimizer");
  add_common(areamap, opt);
  areamap->add_option("--grid", opt.grid, "lattice points per axis (default 21)");
  CLI::App* brickell = app.add_subcommand("brickell", "flatness + balancedness rigidity diagnostic");
  add_common(brickell, opt);
  brickell->add_option("--samples", opt.samples, "number of curvature samples (default 50)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (analyze->parsed()) return cmd_analyze(opt);
    if (funk->parsed()) return cmd_funk_checks(opt);
    if (areamap->parsed()) return cmd_area_map(opt);
    if (brickell->parsed()) return cmd_brickell(opt);
  } catch (const InvalidSpec& e) {
    std::cerr << "error (bad spec): " << e.what() << "\n";
    return kExitBadSpec;
  } catch (const UnsupportedKind& e) {
    std::cerr << "error (bad spec): " << e.what() << "\n";
    return kExitBadSpec;
  } catch (const IoFailure& e) {
    std::cerr << "error (io): " << e.what() << "\n";
    return kExitIo;
  } catch (const Error& e) {
    std::cerr << "error (numeric): " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error (bad spec): " << e.what() << "\n";
    return kExitBadSpec;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
  return kExitOk;
}
