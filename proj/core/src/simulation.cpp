#include "sparsescan/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace sparsescan {

namespace {

// Runs fn(0..count-1) on up to `workers` threads.  Work items are
// independent; determinism comes from each item writing only its own slot.
void parallel_for(int count, int workers, const std::function<void(int)>& fn) {
  workers = std::max(1, std::min(workers, count));
  if (workers == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&]() {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= count) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

// Statistic on the scale the critical value lives on.  The max statistic
// is the one test whose raw value is not a functional of the tail
// uniforms, so it moves to the null cdf scale: max X > quantile(p) iff
// cdf(max X) > p, which makes the uniform-calibrated critical valid for
// every base family.
double comparison_value(TestKind test, const TestStatisticResult& r,
                        const BaseDistribution& base) {
  if (test == TestKind::MaxValue) return base.cdf(r.value);
  return r.log_value ? *r.log_value : r.value;
}

bool rejects(TestKind kind, double comparison, double critical) {
  return reject_direction(kind) == RejectDirection::Large
             ? comparison > critical
             : comparison < critical;
}

TestStatisticResult compute_one(TestKind test, const Sample& s,
                                const BaseDistribution& base) {
  switch (test) {
    case TestKind::HigherCriticism:
      return hc_threshold_stat(s, base);
    case TestKind::BerkJones:
      return bj_stat(s, base);
    case TestKind::MaxValue:
      return max_stat(s);
    case TestKind::StoufferScan:
      return stouffer_scan_stat(s, base);
    case TestKind::TippettScan:
      return tippett_scan_stat(s, base);
  }
  throw std::logic_error("compute_one: unknown test");
}

}  // namespace

CriticalValue calibrate_null(TestKind test, int n, double alpha, int null_reps,
                             std::uint64_t seed, int workers) {
  if (n < 1) throw std::invalid_argument("calibrate_null: n must be >= 1");
  if (test == TestKind::TippettScan && n < 2)
    throw std::invalid_argument("calibrate_null: tippett_scan needs n >= 2");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("calibrate_null: alpha must lie in (0,1)");
  if (null_reps < 100)
    throw std::invalid_argument(
        "calibrate_null: need at least 100 null replications");

  const BaseDistribution base = BaseDistribution::uniform01();
  std::vector<double> values(static_cast<std::size_t>(null_reps));
  parallel_for(null_reps, workers, [&](int rep) {
    Rng rng = make_rng(derive_seed(seed, "null-calibration", rep));
    const Sample s = sample(base, n, rng);
    values[static_cast<std::size_t>(rep)] =
        comparison_value(test, compute_one(test, s, base), base);
  });
  std::sort(values.begin(), values.end());

  const int rank = static_cast<int>(std::ceil(alpha * null_reps));
  const double critical =
      reject_direction(test) == RejectDirection::Large
          ? values[static_cast<std::size_t>(null_reps - rank)]
          : values[static_cast<std::size_t>(rank - 1)];
  return {test, n, alpha, critical};
}

PowerEstimate estimate_power(TestKind test, const MixtureSpec& spec,
                             const CriticalValue& critical, int power_reps,
                             std::uint64_t seed, int workers) {
  if (critical.test != test)
    throw std::invalid_argument(
        "estimate_power: critical value belongs to a different test");
  if (critical.n != spec.n)
    throw std::invalid_argument(
        "estimate_power: critical value calibrated for a different n");
  if (power_reps < 1)
    throw std::invalid_argument("estimate_power: power_reps must be >= 1");

  std::vector<unsigned char> hits(static_cast<std::size_t>(power_reps), 0);
  parallel_for(power_reps, workers, [&](int rep) {
    Rng rng = make_rng(derive_seed(seed, "power", rep));
    const Sample s = mixture_sample(spec, rng);
    const double v =
        comparison_value(test, compute_one(test, s, spec.base), spec.base);
    hits[static_cast<std::size_t>(rep)] = rejects(test, v, critical.value);
  });
  int k = 0;
  for (unsigned char h : hits) k += h;
  const double power = static_cast<double>(k) / power_reps;
  const double se = std::sqrt(power * (1.0 - power) / power_reps);
  return {power, se, power_reps};
}

PowerCurve run_experiment(const ExperimentConfig& config, int workers) {
  if (config.tests.empty())
    throw std::invalid_argument("run_experiment: no tests requested");
  if (config.r_grid.empty())
    throw std::invalid_argument("run_experiment: empty r grid");
  if (config.power_reps < 1)
    throw std::invalid_argument("run_experiment: power_reps must be >= 1");

  PowerCurve curve;

  // Boundary annotations only make sense for power-law tails.
  if (const auto a = config.base.tail_exponent()) {
    curve.scan_boundary_r = 2.0 * config.beta - 1.0;
    curve.threshold_boundary_r = (1.0 + 1.0 / *a) * (2.0 * config.beta - 1.0);
  }

  // One calibration per test, reused across the whole r grid.
  for (std::size_t ti = 0; ti < config.tests.size(); ++ti) {
    const TestKind test = config.tests[ti];
    const auto preset = std::find_if(
        config.preset_criticals.begin(), config.preset_criticals.end(),
        [&](const CriticalValue& cv) {
          return cv.test == test && cv.n == config.n &&
                 cv.alpha == config.alpha;
        });
    if (preset != config.preset_criticals.end()) {
      curve.criticals.push_back(*preset);
    } else {
      if (config.null_reps < 100)
        throw std::invalid_argument(
            "run_experiment: need at least 100 null replications");
      curve.criticals.push_back(calibrate_null(
          test, config.n, config.alpha, config.null_reps,
          derive_seed(config.seed, "calibration", ti), workers));
    }
  }

  // Each replication draws one sample and feeds it to every test: common
  // random numbers keep the curves comparable across tests.
  for (std::size_t ri = 0; ri < config.r_grid.size(); ++ri) {
    const double r = config.r_grid[ri];
    std::optional<MixtureSpec> spec;
    try {
      spec.emplace(config.base, config.n, config.beta, r);
    } catch (const std::exception& e) {
      for (TestKind test : config.tests)
        curve.failures.push_back({test, r, e.what()});
      continue;
    }

    const int reps = config.power_reps;
    std::vector<unsigned char> hits(
        static_cast<std::size_t>(reps) * config.tests.size(), 0);
    try {
      parallel_for(reps, workers, [&](int rep) {
        Rng rng = make_rng(derive_seed(config.seed, "power", ri, rep));
        const Sample s = mixture_sample(*spec, rng);
        const auto results = compute_statistics(s, config.base, config.tests);
        for (std::size_t ti = 0; ti < config.tests.size(); ++ti) {
          const double v =
              comparison_value(config.tests[ti], results[ti], config.base);
          hits[static_cast<std::size_t>(rep) * config.tests.size() + ti] =
              rejects(config.tests[ti], v, curve.criticals[ti].value);
        }
      });
    } catch (const std::exception& e) {
      for (TestKind test : config.tests)
        curve.failures.push_back({test, r, e.what()});
      continue;
    }

    for (std::size_t ti = 0; ti < config.tests.size(); ++ti) {
      int k = 0;
      for (int rep = 0; rep < reps; ++rep)
        k += hits[static_cast<std::size_t>(rep) * config.tests.size() + ti];
      const double power = static_cast<double>(k) / reps;
      const double se = std::sqrt(power * (1.0 - power) / reps);
      curve.cells.push_back({config.tests[ti], r, power, se, reps,
                             curve.criticals[ti].value});
    }
  }

  // Output order: all rows of a test together, r in grid order within.
  std::vector<PowerCell> ordered;
  ordered.reserve(curve.cells.size());
  for (std::size_t ti = 0; ti < config.tests.size(); ++ti)
    for (const PowerCell& cell : curve.cells)
      if (cell.test == config.tests[ti]) ordered.push_back(cell);
  curve.cells = std::move(ordered);

  return curve;
}

}  // namespace sparsescan
