// Command line surface: boundary curve tables, null calibration records,
// and Monte Carlo power experiments driven by key=value config files.
//
// Exit codes: 0 success, 2 config or argument error, 3 some experiment
// cells failed, 4 internal error or total cell failure.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "experiment_io.hpp"
#include "sparsescan/boundaries.hpp"
#include "sparsescan/simulation.hpp"
#include "sparsescan/version.hpp"

namespace {

namespace cli = sparsescan::cli;
namespace fs = std::filesystem;

constexpr const char* kCurveNames =
    "ingster, gg-threshold, gg-max, omega-gumbel, pl-scan, pl-threshold";
constexpr const char* kTestNames = "hc, bj, max, stouffer_scan, tippett_scan";

double parse_flag_double(const char* flag, const std::string& text) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(text, &pos);
    if (pos != text.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument(std::string(flag) + ": expected a number, got '" +
                                text + "'");
  }
}

struct BoundaryArgs {
  std::string curve;
  std::string beta_range;
  double a = 0.0;
  bool has_a = false;
  std::string out;
};

int run_boundary(const BoundaryArgs& args) {
  bool known = false;
  for (const char* name : {"ingster", "gg-threshold", "gg-max", "omega-gumbel",
                           "pl-scan", "pl-threshold"})
    known = known || args.curve == name;
  if (!known)
    throw std::invalid_argument("unknown curve '" + args.curve +
                                "' (valid curves: " + kCurveNames + ")");
  const sparsescan::BoundaryCurve curve = sparsescan::make_boundary_curve(
      args.curve, args.has_a ? std::optional<double>(args.a) : std::nullopt);

  std::vector<std::string> parts;
  std::string rest = args.beta_range;
  for (std::size_t colon; (colon = rest.find(':')) != std::string::npos;) {
    parts.push_back(rest.substr(0, colon));
    rest.erase(0, colon + 1);
  }
  parts.push_back(rest);
  if (parts.size() != 3)
    throw std::invalid_argument("--beta expects start:stop:step");
  const double start = parse_flag_double("--beta start", parts[0]);
  const double stop = parse_flag_double("--beta stop", parts[1]);
  const double step = parse_flag_double("--beta step", parts[2]);
  if (!(step > 0.0)) throw std::invalid_argument("--beta step must be > 0");
  if (!(start <= stop))
    throw std::invalid_argument("--beta start must not exceed stop");
  if (!(start >= 0.5))
    throw std::invalid_argument("--beta start must be >= 0.5");

  std::string csv = "beta,r\n";
  for (int k = 0;; ++k) {
    const double beta = start + k * step;
    if (beta > stop + step * 1e-9) break;
    // The curves live on [1/2, 1); grid points at or past 1 are dropped.
    if (beta >= 1.0 - 1e-12) continue;
    csv += cli::fmt17(beta) + "," + cli::fmt17(curve.evaluate(beta)) + "\n";
  }
  if (args.out.empty())
    std::cout << csv;
  else
    cli::write_text_file(args.out, csv);
  return 0;
}

struct CalibrateArgs {
  std::string test;
  int n = 0;
  double alpha = 0.05;
  int reps = 0;
  std::uint64_t seed = 0;
  int workers = 0;
  std::string out;
};

int run_calibrate(const CalibrateArgs& args) {
  const auto kind = sparsescan::test_from_name(args.test);
  if (!kind)
    throw std::invalid_argument("unknown test '" + args.test +
                                "' (valid tests: " + std::string(kTestNames) +
                                ")");
  const sparsescan::CriticalValue critical =
      sparsescan::calibrate_null(*kind, args.n, args.alpha, args.reps,
                                 args.seed, cli::resolve_workers(args.workers));
  nlohmann::json record = {
      {"test", args.test},       {"n", args.n},       {"alpha", args.alpha},
      {"reps", args.reps},       {"seed", args.seed}, {"critical", critical.value},
  };
  const std::string text = record.dump(2) + "\n";
  if (args.out.empty())
    std::cout << text;
  else
    cli::write_text_file(args.out, text);
  return 0;
}

struct SimulateArgs {
  std::string config;
  std::string out;
  bool plot = false;
  std::uint64_t seed = 0;
  bool has_seed = false;
  double alpha = 0.0;
  bool has_alpha = false;
  int workers = 0;
  std::string criticals;
};

int run_simulate(const SimulateArgs& args) {
  cli::ParsedConfig parsed = cli::load_experiment_config(args.config);
  if (args.has_seed) {
    parsed.experiment.seed = args.seed;
    parsed.raw["seed"] = std::to_string(args.seed);
  }
  if (args.has_alpha) {
    parsed.experiment.alpha = args.alpha;
    parsed.raw["alpha"] = cli::fmt17(args.alpha);
  }
  if (!args.criticals.empty())
    parsed.experiment.preset_criticals = cli::load_criticals(args.criticals);

  const fs::path out_dir(args.out);
  fs::create_directories(out_dir);
  const std::string started = cli::iso_utc_now();
  const sparsescan::PowerCurve curve = sparsescan::run_experiment(
      parsed.experiment, cli::resolve_workers(args.workers));

  std::vector<std::string> outputs;
  const fs::path csv_path = out_dir / "power.csv";
  cli::write_text_file(csv_path.string(), cli::power_csv_text(curve));
  outputs.push_back(csv_path.string());
  if (args.plot) {
    const fs::path svg_path = out_dir / "power.svg";
    cli::write_text_file(svg_path.string(),
                         cli::power_svg_text(parsed.experiment, curve));
    outputs.push_back(svg_path.string());
  }

  nlohmann::json manifest;
  manifest["config"] = parsed.raw;
  manifest["config_hash"] = cli::config_hash(parsed.raw);
  manifest["seed"] = parsed.experiment.seed;
  manifest["started_at"] = started;
  manifest["finished_at"] = cli::iso_utc_now();
  manifest["code_version"] = sparsescan::kVersion;
  manifest["outputs"] = outputs;
  if (curve.scan_boundary_r || curve.threshold_boundary_r) {
    nlohmann::json bounds;
    if (curve.scan_boundary_r) bounds["scan_r"] = *curve.scan_boundary_r;
    if (curve.threshold_boundary_r)
      bounds["threshold_r"] = *curve.threshold_boundary_r;
    manifest["boundaries"] = bounds;
  }
  nlohmann::json criticals = nlohmann::json::array();
  for (const auto& cv : curve.criticals)
    criticals.push_back({{"test", std::string(sparsescan::test_name(cv.test))},
                         {"n", cv.n},
                         {"alpha", cv.alpha},
                         {"critical", cv.value}});
  manifest["criticals"] = criticals;
  nlohmann::json failures = nlohmann::json::array();
  for (const auto& failure : curve.failures)
    failures.push_back(
        {{"test", std::string(sparsescan::test_name(failure.test))},
         {"r", failure.r},
         {"message", failure.message}});
  manifest["failures"] = failures;
  cli::write_text_file((out_dir / "manifest.json").string(),
                       manifest.dump(2) + "\n");

  if (curve.failures.empty()) return 0;
  if (curve.cells.empty()) {
    std::cerr << "every cell failed (" << curve.failures.size()
              << " failures); see manifest.json\n";
    return 4;
  }
  std::cerr << curve.failures.size() << " of "
            << curve.failures.size() + curve.cells.size()
            << " cells failed; see manifest.json\n";
  return 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "sparse-mixture detection toolkit: boundary curve tables, null "
      "calibration, Monte Carlo power experiments"};
  app.require_subcommand(1);

  BoundaryArgs bargs;
  CLI::App* boundary = app.add_subcommand(
      "boundary", "Evaluate a detection boundary curve over a beta grid");
  boundary
      ->add_option("curve", bargs.curve,
                   std::string("curve name (") + kCurveNames + ")")
      ->required();
  boundary
      ->add_option("--beta", bargs.beta_range,
                   "beta grid as start:stop:step; points at or past 1 are "
                   "skipped")
      ->required();
  CLI::Option* boundary_a = boundary->add_option(
      "--a", bargs.a, "shape parameter for gg-threshold, gg-max, pl-threshold");
  boundary->add_option("--out", bargs.out, "CSV output path (default stdout)");

  CalibrateArgs cargs;
  CLI::App* calibrate = app.add_subcommand(
      "calibrate", "Monte Carlo critical value for one test, as JSON");
  calibrate
      ->add_option("--test", cargs.test,
                   std::string("test name (") + kTestNames + ")")
      ->required();
  calibrate->add_option("--n", cargs.n, "sample size")->required();
  calibrate->add_option("--alpha", cargs.alpha, "level (default 0.05)");
  calibrate->add_option("--reps", cargs.reps, "null replications (>= 100)")
      ->required();
  calibrate->add_option("--seed", cargs.seed, "master seed (default 0)");
  calibrate->add_option("--workers", cargs.workers,
                        "worker threads (default: SPARSESCAN_WORKERS or all "
                        "cores); results do not depend on it");
  calibrate->add_option("--out", cargs.out, "JSON output path (default stdout)");

  SimulateArgs sargs;
  CLI::App* simulate = app.add_subcommand(
      "simulate", "Run a power experiment from a key=value config file");
  simulate->add_option("--config", sargs.config, "experiment config file")
      ->required();
  simulate->add_option("--out", sargs.out, "output directory")->required();
  simulate->add_flag("--plot", sargs.plot, "also write power.svg");
  CLI::Option* simulate_seed = simulate->add_option(
      "--seed", sargs.seed, "override the config seed");
  CLI::Option* simulate_alpha = simulate->add_option(
      "--alpha", sargs.alpha, "override the config level");
  simulate->add_option("--workers", sargs.workers,
                       "worker threads (default: SPARSESCAN_WORKERS or all "
                       "cores); results do not depend on it");
  simulate->add_option("--criticals", sargs.criticals,
                       "JSON file of precomputed critical values (calibrate "
                       "output or a previous manifest) to skip recalibration");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  bargs.has_a = boundary_a->count() > 0;
  sargs.has_seed = simulate_seed->count() > 0;
  sargs.has_alpha = simulate_alpha->count() > 0;

  try {
    if (app.got_subcommand(boundary)) return run_boundary(bargs);
    if (app.got_subcommand(calibrate)) return run_calibrate(cargs);
    if (app.got_subcommand(simulate)) return run_simulate(sargs);
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 4;
  }
  return 4;
}
