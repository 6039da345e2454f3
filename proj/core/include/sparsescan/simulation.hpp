#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sparsescan/distributions.hpp"
#include "sparsescan/statistics.hpp"

namespace sparsescan {

// A Monte Carlo critical value with enough identity attached to catch
// calibrations reused against the wrong test, sample size or level.
// `value` lives on the test's comparison scale: the raw statistic for
// large-direction tests, the log statistic for the small-direction ones,
// and the null cdf of the maximum for the max test (the probability
// integral transform makes the uniform calibration portable across
// base families).
struct CriticalValue {
  TestKind test;
  int n;
  double alpha;
  double value;
};

// Null statistics are distribution free (they depend on the data only
// through the tail-uniforms), so calibration always samples uniform01.
// Uses the order statistic at rank ceil(alpha * null_reps) from the
// rejection end, a conservative convention keeping the level <= alpha.
// Requires null_reps >= 100; deterministic in seed, invariant to workers.
CriticalValue calibrate_null(TestKind test, int n, double alpha, int null_reps,
                             std::uint64_t seed, int workers = 1);

struct PowerEstimate {
  double power;
  double se;  // binomial standard error sqrt(power (1-power) / reps)
  int reps;
};

// Fraction of mixture replications crossing the critical value in the
// rejection direction.  Each replication draws from its own derived seed,
// so the estimate is bit-identical for any worker count.
PowerEstimate estimate_power(TestKind test, const MixtureSpec& spec,
                             const CriticalValue& critical, int power_reps,
                             std::uint64_t seed, int workers = 1);

struct ExperimentConfig {
  BaseDistribution base;
  int n = 0;
  double beta = 0.0;
  std::vector<double> r_grid;
  std::vector<TestKind> tests;
  double alpha = 0.05;
  int null_reps = 0;
  int power_reps = 0;
  std::uint64_t seed = 0;
  // Criticals supplied up front (e.g. from an earlier calibration run);
  // a test missing here is calibrated fresh.
  std::vector<CriticalValue> preset_criticals;
};

struct PowerCell {
  TestKind test;
  double r;
  double power;
  double se;
  int reps;
  double critical;
};

struct CellFailure {
  TestKind test;
  double r;
  std::string message;
};

struct PowerCurve {
  std::vector<PowerCell> cells;  // ordered by (test as configured, then r)
  std::vector<CriticalValue> criticals;
  // Asymptotic reference points for power-law tailed bases: the r above
  // which the window tests resp. threshold tests become consistent.
  std::optional<double> scan_boundary_r;
  std::optional<double> threshold_boundary_r;
  std::vector<CellFailure> failures;
};

// Calibrates every requested test once, then estimates power for each
// (test, r) cell.  All tests share each replication's sample, a common
// random numbers scheme; failures are recorded per cell rather than
// aborting the run.
PowerCurve run_experiment(const ExperimentConfig& config, int workers = 1);

}  // namespace sparsescan
