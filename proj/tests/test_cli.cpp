#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

const fs::path kWorkRoot = fs::temp_directory_path() / "mlab_cli_test";

std::string spec_path(const std::string& name) {
  return (fs::path(MLAB_SPECS_DIR) / name).string();
}

int run_cli(const std::string& args, const fs::path& out_dir) {
  fs::create_directories(out_dir);
  const std::string cmd = std::string(MLAB_CLI_PATH) + " " + args + " > " +
                          (out_dir / "stdout.txt").string() + " 2> " +
                          (out_dir / "stderr.txt").string();
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json load_json(const fs::path& path) { return json::parse(slurp(path)); }

struct WorkDir {
  fs::path dir;
  explicit WorkDir(const std::string& name) : dir(kWorkRoot / name) {
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
};

}  // namespace

TEST_CASE("analyze writes a complete report with sane defaults") {
  WorkDir w("analyze");
  const int rc = run_cli("analyze --spec " + spec_path("ball2.json") + " --out " +
                             (w.dir / "out").string(),
                         w.dir);
  CHECK(rc == 0);
  const json doc = load_json(w.dir / "out" / "analyze_report.json");
  CHECK(doc["schema_version"].get<int>() == 1);
  CHECK(doc["command"].get<std::string>() == "analyze");
  CHECK(doc["metadata"]["rule"].get<std::string>() == "trapezoid2d");
  CHECK(doc["metadata"]["nodes"].get<int>() == 256);
  CHECK(doc["metadata"]["body"]["family"].get<std::string>() == "ellipsoid");
  CHECK(doc["validation"]["passed"].get<bool>());
  CHECK(std::abs(doc["report"]["area"].get<double>() - 2 * std::numbers::pi) <= 1e-10);
  CHECK(doc["report"]["balanced"].get<bool>());
  CHECK(std::abs(doc["lambda"]["value"].get<double>() - 0.5) <= 1e-10);
  const std::string console = slurp(w.dir / "stdout.txt");
  CHECK(console.find("balanced") != std::string::npos);
}

TEST_CASE("dimension-3 bodies default to the product Gauss rule") {
  WorkDir w("analyze3");
  const int rc = run_cli("analyze --spec " + spec_path("ball3.json") + " --out " +
                             (w.dir / "out").string(),
                         w.dir);
  CHECK(rc == 0);
  const json doc = load_json(w.dir / "out" / "analyze_report.json");
  CHECK(doc["metadata"]["rule"].get<std::string>() == "gauss_product3d");
  CHECK(doc["metadata"]["nodes"].get<int>() == 2048);
  CHECK(std::abs(doc["report"]["area"].get<double>() - 4 * std::numbers::pi) <= 1e-8);
}

TEST_CASE("reruns are byte-identical") {
  WorkDir w("determinism");
  const std::string spec = spec_path("randers2.json");
  REQUIRE(run_cli("analyze --spec " + spec + " --out " + (w.dir / "a").string(), w.dir) == 0);
  REQUIRE(run_cli("analyze --spec " + spec + " --out " + (w.dir / "b").string(), w.dir) == 0);
  CHECK(slurp(w.dir / "a" / "analyze_report.json") == slurp(w.dir / "b" / "analyze_report.json"));

  REQUIRE(run_cli("funk-checks --spec " + spec + " --samples 8 --seed 5 --out " +
                      (w.dir / "fa").string(),
                  w.dir) == 0);
  REQUIRE(run_cli("funk-checks --spec " + spec + " --samples 8 --seed 5 --out " +
                      (w.dir / "fb").string(),
                  w.dir) == 0);
  CHECK(slurp(w.dir / "fa" / "funk_checks.csv") == slurp(w.dir / "fb" / "funk_checks.csv"));
}

TEST_CASE("funk-checks reports per-sample residuals under tolerance") {
  WorkDir w("funk");
  const int rc = run_cli("funk-checks --spec " + spec_path("ellipse.json") +
                             " --samples 10 --out " + (w.dir / "out").string(),
                         w.dir);
  CHECK(rc == 0);
  const std::string csv = slurp(w.dir / "out" / "funk_checks.csv");
  CHECK(csv.find("sample,okada,conformal_factor,conformal_deviation,curvature,jacobian") !=
        std::string::npos);
  int newlines = 0;
  for (char ch : csv) newlines += ch == '\n';
  CHECK(newlines == 12);  // header + 10 samples + max row
  CHECK(csv.find("\nmax,") != std::string::npos);

  // an absurd tolerance turns success into exit code 1
  const int tight = run_cli("funk-checks --spec " + spec_path("ellipse.json") +
                                " --samples 5 --tol okada=1e-18 --out " +
                                (w.dir / "tight").string(),
                            w.dir);
  CHECK(tight == 1);
}

TEST_CASE("area-map finds the grid, the bounds, and the minimizer") {
  WorkDir w("areamap");
  const int rc = run_cli("area-map --spec " + spec_path("randers2.json") +
                             " --grid 7 --nodes 128 --out " + (w.dir / "out").string(),
                         w.dir);
  CHECK(rc == 0);
  CHECK(fs::exists(w.dir / "out" / "area_grid.csv"));
  const json doc = load_json(w.dir / "out" / "area_minimizer.json");
  CHECK(doc["schema_version"].get<int>() == 1);
  CHECK(doc["grid"]["bounds_satisfied"].get<bool>());
  CHECK(doc["grid"]["min_hessian_eigenvalue"].get<double>() > 0.0);
  CHECK(doc["minimizer"]["p"][0].get<double>() < 0.0);  // pushed against the one-form
  CHECK(doc["minimizer"]["gradient_norm"].get<double>() <=
        1e-8 * doc["minimizer"]["r"].get<double>());
}

TEST_CASE("brickell verdicts distinguish flat-balanced bodies") {
  WorkDir w("brickell");
  const int rc = run_cli("brickell --spec " + spec_path("ellipsoid3.json") +
                             " --nodes 512 --out " + (w.dir / "e").string(),
                         w.dir);
  CHECK(rc == 0);
  const json e = load_json(w.dir / "e" / "brickell_report.json");
  CHECK(e["report"]["verdict"].get<std::string>() == "consistent with Theorem 3");
  CHECK(e["report"]["q_norm"].get<double>() <= 1e-8);

  REQUIRE(run_cli("brickell --spec " + spec_path("quartic3.json") + " --nodes 512 --out " +
                      (w.dir / "q").string(),
                  w.dir) == 0);
  const json q = load_json(w.dir / "q" / "brickell_report.json");
  CHECK(q["report"]["verdict"].get<std::string>() == "not applicable");
  CHECK(q["report"]["q_norm"].get<double>() > 5e-3);
}

TEST_CASE("configuration errors exit with code 2") {
  WorkDir w("errors");
  const fs::path out = w.dir / "out";

  const std::string bad = (w.dir / "bad.json").string();
  std::ofstream(bad) << "{ not json";
  CHECK(run_cli("analyze --spec " + bad + " --out " + out.string(), w.dir) == 2);

  const std::string wrong = (w.dir / "wrong.json").string();
  std::ofstream(wrong) << R"({"dimension": 2, "family": "moon", "params": {}})";
  CHECK(run_cli("analyze --spec " + wrong + " --out " + out.string(), w.dir) == 2);

  CHECK(run_cli("analyze --spec " + spec_path("ball2.json") + " --rule simpson --out " +
                    out.string(),
                w.dir) == 2);
  CHECK(run_cli("analyze --spec " + spec_path("ball2.json") + " --nodes 3 --out " + out.string(),
                w.dir) == 2);
  CHECK(run_cli("analyze --spec " + spec_path("ball3.json") + " --rule trapezoid2d --out " +
                    out.string(),
                w.dir) == 2);
  CHECK(run_cli("funk-checks --spec " + spec_path("ball2.json") + " --tol warp=1 --out " +
                    out.string(),
                w.dir) == 2);

  // missing input file is an io failure, not a spec failure
  CHECK(run_cli("analyze --spec " + (w.dir / "absent.json").string() + " --out " + out.string(),
                w.dir) == 4);

  // no subcommand: the argument parser refuses
  CHECK(run_cli("", w.dir) != 0);
}
