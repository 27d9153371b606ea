// potex: spectral exterior-problem solver and operator-calculus toolkit
// for the unit sphere. Subcommands: solve, rates, verify, extremal.
//
// Exit codes: 0 success, 1 verify check failed, 2 invalid configuration,
// 3 Robin admissibility failure, 4 I/O failure.

#include <cmath>
#include <complex>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "potex/io.hpp"
#include "potex/operators.hpp"
#include "potex/rates.hpp"
#include "potex/solvers.hpp"
#include "potex/transform.hpp"
#include "potex/version.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitBadConfig = 2;
constexpr int kExitInadmissible = 3;
constexpr int kExitIo = 4;

std::string fmt(double v) { return potex::detail::format_double(v); }

unsigned long seed_from_env() {
  const char* s = std::getenv("POTEX_SEED");
  if (!s || !*s) return 0;
  try {
    return std::stoul(s);
  } catch (...) {
    throw potex::domain_error("POTEX_SEED must be a nonnegative integer");
  }
}

potex::ProblemSpec make_problem(const std::string& name, double a, double b, int k_max) {
  if (name == "dirichlet") return potex::ProblemSpec::dirichlet(k_max);
  if (name == "neumann") return potex::ProblemSpec::neumann(k_max);
  if (name == "robin") return potex::ProblemSpec::robin(a, b, k_max);
  throw potex::domain_error("unknown problem kind: " + name);
}

potex::SphericalSpectrum random_spectrum(std::mt19937& rng, int k_max) {
  std::normal_distribution<double> gauss;
  potex::SphericalSpectrum s(k_max);
  for (auto& c : s.coeffs) c = {gauss(rng), gauss(rng)};
  return s;
}

// ---------------------------------------------------------------- solve ----

struct SolveConfig {
  std::string problem = "dirichlet";
  double a = 1.0, b = -1.0;
  std::string coeffs;
  int kmax = -1;  // -1: use the data file's truncation
  std::vector<double> radii;
  double rmin = 0.0, rmax = 0.0;
  int points = 0;
  std::string out = "field.csv";
  std::string format = "csv";
};

int run_solve(const SolveConfig& cfg) {
  const potex::SphericalSpectrum h = potex::read_spectrum_json(cfg.coeffs);
  const int k_max = cfg.kmax < 0 ? h.k_max : cfg.kmax;
  const potex::ProblemSpec spec = make_problem(cfg.problem, cfg.a, cfg.b, k_max);

  std::vector<double> radii = cfg.radii;
  const bool sweep = cfg.points > 0 || cfg.rmin > 0.0 || cfg.rmax > 0.0;
  if (sweep) {
    if (!radii.empty())
      throw potex::domain_error("give either --r or --rmin/--rmax/--points, not both");
    if (!(cfg.rmin > 1.0) || !(cfg.rmax > cfg.rmin) || cfg.points < 2)
      throw potex::domain_error("radius sweep needs 1 < rmin < rmax and points >= 2");
    radii = potex::geometric_grid(cfg.rmin, cfg.rmax, cfg.points);
  }
  if (radii.empty()) throw potex::domain_error("no evaluation radius: pass --r or a sweep");
  for (double r : radii)
    if (!(r > 1.0)) throw potex::domain_error("evaluation radius must satisfy r > 1");

  const potex::ExteriorField field = potex::solve(spec, h);
  const potex::SphereGrid grid = potex::make_grid(spec.k_max);
  potex::write_field_csv(cfg.out, field, grid, radii);

  nlohmann::json trace = nlohmann::json::array();
  for (double r : radii)
    trace.push_back({{"r", r}, {"boundary_error", potex::boundary_error(spec, h, r)}});

  if (cfg.format == "json") {
    nlohmann::json j;
    j["version"] = potex::kVersion;
    j["command"] = "solve";
    j["config"] = {{"problem", cfg.problem}, {"a", cfg.a},       {"b", cfg.b},
                   {"coeffs", cfg.coeffs},   {"kmax", k_max},    {"out", cfg.out},
                   {"format", cfg.format},   {"radii", radii}};
    j["boundary_error"] = trace;
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << "r,boundary_error\n";
    for (const auto& row : trace)
      std::cout << fmt(row.at("r").get<double>()) << ','
                << fmt(row.at("boundary_error").get<double>()) << '\n';
  }
  return kExitOk;
}

// ---------------------------------------------------------------- rates ----

struct RatesConfig {
  std::string problem = "dirichlet";
  double a = 1.0, b = -1.0;
  std::string coeffs;
  double extremal_alpha = -1.0;
  int kmax = -1;  // -1: 4096 for --extremal, data truncation for --coeffs
  double tmin = 1e-3, tmax = 1e-1;
  int points = 24;
  std::string out = "rates.json";
  std::string format = "csv";
};

int run_rates(const RatesConfig& cfg, unsigned long seed) {
  const bool have_file = !cfg.coeffs.empty();
  const bool have_alpha = cfg.extremal_alpha >= 0.0;
  if (have_file == have_alpha)
    throw potex::domain_error("pass exactly one of --coeffs and --extremal");

  int k_max = cfg.kmax;
  potex::SphericalSpectrum h;
  if (have_alpha) {
    if (k_max < 0) k_max = 4096;
    h = potex::extremal_h(cfg.extremal_alpha, k_max);
  } else {
    h = potex::read_spectrum_json(cfg.coeffs);
    if (k_max < 0) k_max = h.k_max;
  }
  const potex::ProblemSpec spec = make_problem(cfg.problem, cfg.a, cfg.b, k_max);
  const std::vector<double> grid = potex::geometric_grid(cfg.tmin, cfg.tmax, cfg.points);

  potex::EquivalenceReport report;
  if (potex::parseval_norm(h) > 0.0) {
    report = potex::equivalence_battery(spec, h, grid);
  } else {
    // Zero data: every probe norm vanishes, slopes are undefined, and the
    // Abel identity holds trivially. Report flags instead of failing.
    for (std::size_t p = 0; p < potex::kAllProbes.size(); ++p)
      report.probes[p] = potex::measure({potex::kAllProbes[p], spec, h, grid});
    report.identity_residual = 0.0;
  }

  nlohmann::json j = potex::battery_json(report);
  j["version"] = potex::kVersion;
  j["command"] = "rates";
  j["config"] = {{"problem", cfg.problem},
                 {"a", cfg.a},
                 {"b", cfg.b},
                 {"coeffs", have_file ? nlohmann::json(cfg.coeffs) : nlohmann::json()},
                 {"extremal_alpha",
                  have_alpha ? nlohmann::json(cfg.extremal_alpha) : nlohmann::json()},
                 {"kmax", k_max},
                 {"tmin", cfg.tmin},
                 {"tmax", cfg.tmax},
                 {"points", cfg.points},
                 {"out", cfg.out},
                 {"format", cfg.format},
                 {"seed", seed}};

  std::ofstream out(cfg.out);
  if (!out) throw potex::io_error("cannot open report for writing: " + cfg.out);
  out << j.dump(2) << '\n';

  const std::filesystem::path stem =
      std::filesystem::path(cfg.out).replace_extension("");
  for (std::size_t p = 0; p < potex::kAllProbes.size(); ++p) {
    std::filesystem::path csv = stem;
    csv += std::string("_") + potex::probe_name(potex::kAllProbes[p]);
    csv += ".csv";
    potex::write_rate_csv(csv, report.probes[p]);
  }

  if (cfg.format == "json") {
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << "probe,slope,stderr,saturation_ratio\n";
    for (std::size_t p = 0; p < potex::kAllProbes.size(); ++p) {
      const potex::RateReport& r = report.probes[p];
      std::cout << potex::probe_name(potex::kAllProbes[p]) << ',';
      if (r.slope_defined)
        std::cout << fmt(r.slope) << ',' << fmt(r.slope_stderr) << ','
                  << fmt(r.saturation_ratio) << '\n';
      else
        std::cout << "undefined,undefined,undefined\n";
    }
  }
  return kExitOk;
}

// --------------------------------------------------------------- verify ----

struct CheckResult {
  std::string name;
  bool pass = false;
  double measured = 0.0;
  double tolerance = 0.0;
  bool inverted = false;  // pass means measured >= tolerance
};

struct VerifyConfig {
  std::string suite = "all";
  int kmax = 16;
  double a = 1.0, b = -1.0;
  double tol = 1.0;
  std::string out;
  std::string format = "csv";
};

CheckResult check_orthonormality(int kmax, double tol_scale) {
  const potex::SphereGrid grid = potex::make_grid(2 * kmax);
  double worst = 0.0;
  for (int k = 0; k <= kmax; ++k)
    for (int m = -k; m <= k; ++m) {
      potex::SphericalSpectrum unit(kmax);
      unit.at(k, m) = 1.0;
      const potex::SphericalSpectrum gram =
          potex::analyze(potex::synthesize(unit, grid), kmax);
      for (int j = 0; j <= kmax; ++j)
        for (int l = -j; l <= j; ++l) {
          const double expect = (j == k && l == m) ? 1.0 : 0.0;
          worst = std::max(worst, std::abs(gram.at(j, l) - expect));
        }
    }
  const double tol = 1e-12 * tol_scale;
  return {"orthonormality", worst <= tol, worst, tol, false};
}

CheckResult check_roundtrip(int kmax, unsigned long seed, double tol_scale) {
  std::mt19937 rng(static_cast<std::mt19937::result_type>(seed));
  const potex::SphereGrid grid = potex::make_grid(kmax);
  double worst = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const potex::SphericalSpectrum s = random_spectrum(rng, kmax);
    const potex::SphericalSpectrum back = potex::analyze(potex::synthesize(s, grid), kmax);
    for (std::size_t i = 0; i < s.coeffs.size(); ++i)
      worst = std::max(worst, std::abs(back.coeffs[i] - s.coeffs[i]));
  }
  const double tol = 1e-12 * tol_scale;
  return {"roundtrip", worst <= tol, worst, tol, false};
}

CheckResult check_semigroup(int kmax, double tol_scale) {
  double worst = 0.0;
  for (const potex::ProblemSpec& spec :
       {potex::ProblemSpec::dirichlet(kmax), potex::ProblemSpec::neumann(kmax)}) {
    for (int i = 0; i < 10; ++i)
      for (int j = 0; j < 10; ++j) {
        const double s = 5.0 * i / 9.0;
        const double t = 5.0 * j / 9.0;
        worst = std::max(worst, potex::semigroup_defect(spec, s, t));
        const potex::DiagonalOperator vs = potex::inverse_semigroup(spec, s);
        const potex::DiagonalOperator vt = potex::inverse_semigroup(spec, t);
        const potex::DiagonalOperator vst = potex::inverse_semigroup(spec, s + t);
        for (std::size_t k = 0; k < vst.multipliers.size(); ++k)
          worst = std::max(worst, std::abs(vs.multipliers[k] * vt.multipliers[k] -
                                           vst.multipliers[k]));
      }
  }
  const double tol = 1e-14 * tol_scale;
  return {"semigroup", worst <= tol, worst, tol, false};
}

CheckResult check_robin_defect(int kmax, double a, double b, double tol_scale) {
  const potex::ProblemSpec spec = potex::ProblemSpec::robin(a, b, kmax);
  const double t = std::log(2.0);
  const double defect = potex::semigroup_defect(spec, t, t);
  // Inverted convention: a genuinely Robin family must fail the semigroup
  // law by a visible margin, so large defect = pass.
  const double threshold = 0.01 / tol_scale;
  return {"robin-defect", defect >= threshold, defect, threshold, true};
}

CheckResult check_interconnection(int kmax, unsigned long seed, double tol_scale) {
  std::mt19937 rng(static_cast<std::mt19937::result_type>(seed) + 1);
  const std::vector<double> lambdas = potex::geometric_grid(1e-3, 1e3, 13);
  double worst = 0.0;
  for (const potex::ProblemSpec& spec :
       {potex::ProblemSpec::dirichlet(kmax), potex::ProblemSpec::neumann(kmax)}) {
    for (int trial = 0; trial < 10; ++trial) {
      const potex::SphericalSpectrum h = random_spectrum(rng, kmax);
      const double hn = potex::parseval_norm(h);
      for (double lam : lambdas)
        worst = std::max(worst, potex::interconnection_residual(spec, lam, h) / hn);
    }
  }
  const double tol = 1e-13 * tol_scale;
  return {"interconnection", worst <= tol, worst, tol, false};
}

CheckResult check_k_sandwich(int kmax, unsigned long seed, double /*tol_scale*/) {
  std::mt19937 rng(static_cast<std::mt19937::result_type>(seed) + 2);
  std::uniform_real_distribution<double> logt(std::log(1e-2), std::log(10.0));
  double worst = -std::numeric_limits<double>::infinity();
  for (const potex::ProblemSpec& spec :
       {potex::ProblemSpec::dirichlet(kmax), potex::ProblemSpec::neumann(kmax)}) {
    for (int trial = 0; trial < 50; ++trial) {
      const potex::SphericalSpectrum h = random_spectrum(rng, kmax);
      const double t = std::exp(logt(rng));
      const potex::KFunctionalResult kf = potex::k_functional(spec, h, t);
      worst = std::max(worst, kf.quadratic_k - kf.upper_k);
      worst = std::max(worst, kf.upper_k - std::numbers::sqrt2 * kf.quadratic_k);
    }
  }
  // The sandwich is an exact inequality; any positive margin is a failure.
  return {"k-sandwich", worst <= 0.0, worst, 0.0, false};
}

CheckResult check_harmonicity(unsigned long seed, double a, double b, double tol_scale) {
  std::mt19937 rng(static_cast<std::mt19937::result_type>(seed) + 3);
  const int kmax = 8;
  const potex::SphereGrid grid = potex::make_grid(kmax);
  double worst = 0.0;
  for (const potex::ProblemSpec& spec :
       {potex::ProblemSpec::dirichlet(kmax), potex::ProblemSpec::neumann(kmax),
        potex::ProblemSpec::robin(a, b, kmax)}) {
    const potex::SphericalSpectrum h = random_spectrum(rng, kmax);
    const potex::ExteriorField field = potex::solve(spec, h);
    const double coarse = potex::laplace_residual(field, grid, 2.0, 1e-2);
    const double fine = potex::laplace_residual(field, grid, 2.0, 5e-3);
    worst = std::max(worst, std::abs(coarse / fine - 4.0));
  }
  const double tol = 0.5 * tol_scale;
  return {"harmonicity", worst <= tol, worst, tol, false};
}

int run_verify(const VerifyConfig& cfg, unsigned long seed) {
  const std::set<std::string> known = {"orthonormality", "roundtrip",       "semigroup",
                                       "robin-defect",   "interconnection", "k-sandwich",
                                       "harmonicity"};
  std::set<std::string> wanted;
  if (cfg.suite == "all")
    wanted = known;
  else if (known.count(cfg.suite))
    wanted = {cfg.suite};
  else
    throw potex::domain_error("unknown verify suite: " + cfg.suite);
  if (cfg.kmax < 1) throw potex::domain_error("verify: --kmax must be >= 1");
  if (!(cfg.tol > 0.0)) throw potex::domain_error("verify: --tol must be > 0");

  std::vector<CheckResult> results;
  if (wanted.count("orthonormality"))
    results.push_back(check_orthonormality(cfg.kmax, cfg.tol));
  if (wanted.count("roundtrip")) results.push_back(check_roundtrip(cfg.kmax, seed, cfg.tol));
  if (wanted.count("semigroup")) results.push_back(check_semigroup(cfg.kmax, cfg.tol));
  if (wanted.count("robin-defect"))
    results.push_back(check_robin_defect(cfg.kmax, cfg.a, cfg.b, cfg.tol));
  if (wanted.count("interconnection"))
    results.push_back(check_interconnection(cfg.kmax, seed, cfg.tol));
  if (wanted.count("k-sandwich"))
    results.push_back(check_k_sandwich(std::min(cfg.kmax, 24), seed, cfg.tol));
  if (wanted.count("harmonicity"))
    results.push_back(check_harmonicity(seed, cfg.a, cfg.b, cfg.tol));

  bool all_pass = true;
  nlohmann::json checks;
  for (const CheckResult& r : results) {
    all_pass = all_pass && r.pass;
    checks[r.name] = {{"pass", r.pass},
                      {"measured", r.measured},
                      {"tolerance", r.tolerance},
                      {"inverted", r.inverted}};
  }

  nlohmann::json j;
  j["version"] = potex::kVersion;
  j["command"] = "verify";
  j["config"] = {{"suite", cfg.suite}, {"kmax", cfg.kmax}, {"a", cfg.a},
                 {"b", cfg.b},         {"tol", cfg.tol},   {"seed", seed}};
  j["checks"] = std::move(checks);
  j["pass"] = all_pass;

  if (!cfg.out.empty()) {
    std::ofstream out(cfg.out);
    if (!out) throw potex::io_error("cannot open report for writing: " + cfg.out);
    out << j.dump(2) << '\n';
  }

  if (cfg.format == "json") {
    std::cout << j.dump(2) << '\n';
  } else {
    for (const CheckResult& r : results)
      std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << r.name << ": measured "
                << fmt(r.measured) << (r.inverted ? " >= threshold " : " <= tol ")
                << fmt(r.tolerance) << (r.pass ? "" : "  VIOLATED") << '\n';
  }
  return all_pass ? kExitOk : kExitCheckFailed;
}

// ------------------------------------------------------------- extremal ----

struct ExtremalConfig {
  double alpha = 0.5;
  int kmax = 4096;
  std::string out = "extremal.json";
};

int run_extremal(const ExtremalConfig& cfg) {
  const potex::SphericalSpectrum h = potex::extremal_h(cfg.alpha, cfg.kmax);
  potex::write_spectrum_json(cfg.out, h);
  std::cout << "wrote " << cfg.out << " (alpha " << fmt(cfg.alpha) << ", k_max "
            << cfg.kmax << ")\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spectral exterior-problem solver and operator calculus for the unit sphere"};
  app.require_subcommand(1);
  app.set_version_flag("--version", potex::kVersion);

  SolveConfig solve_cfg;
  CLI::App* solve = app.add_subcommand("solve", "solve an exterior problem and export the field");
  solve->add_option("--problem", solve_cfg.problem, "dirichlet | neumann | robin")
      ->check(CLI::IsMember({"dirichlet", "neumann", "robin"}));
  solve->add_option("--a", solve_cfg.a, "Robin coefficient of w");
  solve->add_option("--b", solve_cfg.b, "Robin coefficient of dw/dr");
  solve->add_option("--coeffs", solve_cfg.coeffs, "boundary data spectrum JSON")->required();
  solve->add_option("--kmax", solve_cfg.kmax, "problem truncation (default: data truncation)");
  solve->add_option("--r", solve_cfg.radii, "evaluation radius (repeatable), r > 1");
  solve->add_option("--rmin", solve_cfg.rmin, "radius sweep start, > 1");
  solve->add_option("--rmax", solve_cfg.rmax, "radius sweep end");
  solve->add_option("--points", solve_cfg.points, "radius sweep point count");
  solve->add_option("--out", solve_cfg.out, "field CSV path (default field.csv)");
  solve->add_option("--format", solve_cfg.format, "stdout summary format")
      ->check(CLI::IsMember({"csv", "json"}));

  RatesConfig rates_cfg;
  CLI::App* rates = app.add_subcommand("rates", "rate equivalence battery across all probes");
  rates->add_option("--problem", rates_cfg.problem, "dirichlet | neumann")
      ->check(CLI::IsMember({"dirichlet", "neumann", "robin"}));
  rates->add_option("--a", rates_cfg.a, "Robin coefficient of w");
  rates->add_option("--b", rates_cfg.b, "Robin coefficient of dw/dr");
  rates->add_option("--coeffs", rates_cfg.coeffs, "data spectrum JSON");
  rates->add_option("--extremal", rates_cfg.extremal_alpha,
                    "use extremal data of this order instead of --coeffs");
  rates->add_option("--kmax", rates_cfg.kmax,
                    "problem truncation (default: 4096 with --extremal, else data truncation)");
  rates->add_option("--tmin", rates_cfg.tmin, "probe grid start (default 1e-3)");
  rates->add_option("--tmax", rates_cfg.tmax, "probe grid end (default 1e-1)");
  rates->add_option("--points", rates_cfg.points, "probe grid size (default 24)");
  rates->add_option("--out", rates_cfg.out,
                    "battery JSON path (default rates.json); per-probe CSVs land beside it");
  rates->add_option("--format", rates_cfg.format, "stdout summary format")
      ->check(CLI::IsMember({"csv", "json"}));

  VerifyConfig verify_cfg;
  CLI::App* verify = app.add_subcommand("verify", "run the library's invariant checks");
  verify->add_option("--suite", verify_cfg.suite,
                     "all | orthonormality | roundtrip | semigroup | robin-defect | "
                     "interconnection | k-sandwich | harmonicity");
  verify->add_option("--kmax", verify_cfg.kmax, "check truncation (default 16)");
  verify->add_option("--a", verify_cfg.a, "Robin coefficient of w (default 1)");
  verify->add_option("--b", verify_cfg.b, "Robin coefficient of dw/dr (default -1)");
  verify->add_option("--tol", verify_cfg.tol,
                     "tolerance scale factor; > 1 loosens every check");
  verify->add_option("--out", verify_cfg.out, "write the JSON report here");
  verify->add_option("--format", verify_cfg.format, "stdout format: csv lines or json")
      ->check(CLI::IsMember({"csv", "json"}));

  ExtremalConfig extremal_cfg;
  CLI::App* extremal = app.add_subcommand("extremal", "write extremal data of a given order");
  extremal->add_option("--alpha", extremal_cfg.alpha, "smoothness order in (0, 1)")
      ->required();
  extremal->add_option("--kmax", extremal_cfg.kmax, "truncation, >= 64 (default 4096)");
  extremal->add_option("--out", extremal_cfg.out, "spectrum JSON path (default extremal.json)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitBadConfig;
  }

  try {
    const unsigned long seed = seed_from_env();
    if (app.got_subcommand(solve)) return run_solve(solve_cfg);
    if (app.got_subcommand(rates)) return run_rates(rates_cfg, seed);
    if (app.got_subcommand(verify)) return run_verify(verify_cfg, seed);
    if (app.got_subcommand(extremal)) return run_extremal(extremal_cfg);
    std::cerr << "no subcommand\n";
    return kExitBadConfig;
  } catch (const potex::admissibility_error& e) {
    std::cerr << "admissibility failure: " << e.what() << '\n';
    return kExitInadmissible;
  } catch (const potex::io_error& e) {
    std::cerr << "i/o failure: " << e.what() << '\n';
    return kExitIo;
  } catch (const potex::unsupported_problem_error& e) {
    std::cerr << "invalid configuration: " << e.what() << '\n';
    return kExitBadConfig;
  } catch (const potex::grid_error& e) {
    std::cerr << "invalid configuration: " << e.what() << '\n';
    return kExitBadConfig;
  } catch (const std::exception& e) {
    std::cerr << "invalid configuration: " << e.what() << '\n';
    return kExitBadConfig;
  }
}
