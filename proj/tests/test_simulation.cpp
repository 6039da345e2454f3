#include <doctest.h>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "sparsescan/simulation.hpp"

using namespace sparsescan;

TEST_SUITE("simulation") {

TEST_CASE("max test calibration matches the closed form quantile") {
  // Under the null the max of n uniforms has cdf x^n, so the exact
  // critical value at level alpha is (1 - alpha)^(1/n).
  const int n = 100;
  const double alpha = 0.05;
  const auto crit = calibrate_null(TestKind::MaxValue, n, alpha, 4000, 31);
  CHECK(crit.test == TestKind::MaxValue);
  CHECK(crit.n == n);
  CHECK(crit.alpha == alpha);
  const double exact = std::pow(1.0 - alpha, 1.0 / n);
  CHECK(std::fabs(crit.value - exact) <= 3e-4);
  // Conservative convention: the empirical rejection rate at this cut
  // stays at or below alpha by construction, so the cut sits at or above
  // the true quantile's neighbourhood rather than below it.
  CHECK(crit.value >= exact - 3e-4);
}

TEST_CASE("calibration is deterministic and worker invariant") {
  for (TestKind test : kAllTests) {
    const auto a = calibrate_null(test, 80, 0.05, 600, 17, 1);
    const auto b = calibrate_null(test, 80, 0.05, 600, 17, 4);
    const auto c = calibrate_null(test, 80, 0.05, 600, 18, 1);
    CHECK(a.value == b.value);
    CHECK(a.value != c.value);
  }
}

TEST_CASE("calibration input validation") {
  CHECK_THROWS_AS(calibrate_null(TestKind::HigherCriticism, 100, 0.05, 99, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(calibrate_null(TestKind::HigherCriticism, 100, 0.0, 500, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(calibrate_null(TestKind::TippettScan, 1, 0.05, 500, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(calibrate_null(TestKind::HigherCriticism, 0, 0.05, 500, 1),
                  std::invalid_argument);
}

TEST_CASE("null rejection rates stay near the level across families") {
  // Criticals come from the uniform null; fresh samples from a heavy
  // tailed base must reject at close to alpha, the distribution freeness
  // in action.  At r = 0 the power law shift is mu = 1 for cauchy, a
  // contamination so faint at this n that rejection stays near the level.
  const int n = 200;
  const double alpha = 0.05;
  const MixtureSpec null_spec(BaseDistribution::cauchy(), n, 0.6, 0.0);
  for (TestKind test : kAllTests) {
    const auto crit = calibrate_null(test, n, alpha, 2000, 7001);
    const auto est = estimate_power(test, null_spec, crit, 1000, 7002);
    CHECK(est.reps == 1000);
    CHECK(est.power >= 0.02);
    CHECK(est.power <= 0.08);
    CHECK(std::fabs(est.se - std::sqrt(est.power * (1.0 - est.power) / 1000)) <=
          1e-15);
  }
}

TEST_CASE("power estimation validates the critical value identity") {
  const MixtureSpec spec(BaseDistribution::normal(), 100, 0.6, 1.0);
  const auto crit = calibrate_null(TestKind::MaxValue, 100, 0.05, 200, 3);
  CHECK_THROWS_AS(
      estimate_power(TestKind::HigherCriticism, spec, crit, 100, 5),
      std::invalid_argument);
  CriticalValue wrong_n = crit;
  wrong_n.n = 99;
  CHECK_THROWS_AS(estimate_power(TestKind::MaxValue, spec, wrong_n, 100, 5),
                  std::invalid_argument);
  CHECK_THROWS_AS(estimate_power(TestKind::MaxValue, spec, crit, 0, 5),
                  std::invalid_argument);
}

TEST_CASE("power estimation is deterministic and worker invariant") {
  const MixtureSpec spec(BaseDistribution::cauchy(), 150, 0.6, 1.0);
  const auto crit = calibrate_null(TestKind::StoufferScan, 150, 0.05, 400, 21);
  const auto a = estimate_power(TestKind::StoufferScan, spec, crit, 300, 9, 1);
  const auto b = estimate_power(TestKind::StoufferScan, spec, crit, 300, 9, 3);
  const auto c = estimate_power(TestKind::StoufferScan, spec, crit, 300, 10, 1);
  CHECK(a.power == b.power);
  CHECK(a.power != c.power);
}

TEST_CASE("strong heavy tailed signal is detected nearly always") {
  const MixtureSpec spec(BaseDistribution::cauchy(), 500, 0.55, 3.0);
  for (TestKind test : {TestKind::MaxValue, TestKind::StoufferScan}) {
    const auto crit = calibrate_null(test, 500, 0.05, 500, 4242);
    const auto est = estimate_power(test, spec, crit, 200, 4243);
    CHECK(est.power >= 0.95);
  }
}

TEST_CASE("experiment produces ordered cells with shared calibrations") {
  ExperimentConfig config{BaseDistribution::student_t(2.0)};
  config.n = 120;
  config.beta = 0.6;
  config.r_grid = {0.4, 1.2};
  config.tests = {TestKind::MaxValue, TestKind::HigherCriticism};
  config.alpha = 0.05;
  config.null_reps = 300;
  config.power_reps = 150;
  config.seed = 99;
  const PowerCurve curve = run_experiment(config);

  REQUIRE(curve.cells.size() == 4);
  CHECK(curve.cells[0].test == TestKind::MaxValue);
  CHECK(curve.cells[0].r == 0.4);
  CHECK(curve.cells[1].test == TestKind::MaxValue);
  CHECK(curve.cells[1].r == 1.2);
  CHECK(curve.cells[2].test == TestKind::HigherCriticism);
  CHECK(curve.cells[3].test == TestKind::HigherCriticism);
  REQUIRE(curve.criticals.size() == 2);
  CHECK(curve.cells[0].critical == curve.criticals[0].value);
  CHECK(curve.cells[2].critical == curve.criticals[1].value);
  CHECK(curve.failures.empty());

  // Power law base: asymptotic reference points are annotated.
  REQUIRE(curve.scan_boundary_r.has_value());
  REQUIRE(curve.threshold_boundary_r.has_value());
  CHECK(std::fabs(*curve.scan_boundary_r - 0.2) <= 1e-12);
  CHECK(std::fabs(*curve.threshold_boundary_r - 1.5 * 0.2) <= 1e-12);
}

TEST_CASE("experiment on a light tailed base carries no reference points") {
  ExperimentConfig config{BaseDistribution::normal()};
  config.n = 60;
  config.beta = 0.7;
  config.r_grid = {0.5};
  config.tests = {TestKind::MaxValue};
  config.null_reps = 150;
  config.power_reps = 50;
  config.seed = 1;
  const PowerCurve curve = run_experiment(config);
  CHECK(!curve.scan_boundary_r.has_value());
  CHECK(!curve.threshold_boundary_r.has_value());
}

TEST_CASE("experiment power grows with the effect size") {
  ExperimentConfig config{BaseDistribution::cauchy()};
  config.n = 300;
  config.beta = 0.6;
  config.r_grid = {0.3, 1.0, 2.5};
  config.tests = {TestKind::StoufferScan, TestKind::HigherCriticism};
  config.null_reps = 400;
  config.power_reps = 250;
  config.seed = 2024;
  const PowerCurve curve = run_experiment(config);
  REQUIRE(curve.cells.size() == 6);
  for (int t = 0; t < 2; ++t) {
    for (int i = 1; i < 3; ++i) {
      const auto& lo = curve.cells[t * 3 + i - 1];
      const auto& hi = curve.cells[t * 3 + i];
      const double joint_se = std::sqrt(lo.se * lo.se + hi.se * hi.se);
      CHECK(hi.power >= lo.power - 2.0 * joint_se);
    }
  }
}

TEST_CASE("experiment is invariant to the worker count") {
  ExperimentConfig config{BaseDistribution::cauchy()};
  config.n = 90;
  config.beta = 0.65;
  config.r_grid = {0.5, 1.5};
  config.tests = {TestKind::HigherCriticism, TestKind::TippettScan};
  config.null_reps = 200;
  config.power_reps = 120;
  config.seed = 5150;
  const PowerCurve one = run_experiment(config, 1);
  const PowerCurve four = run_experiment(config, 4);
  REQUIRE(one.cells.size() == four.cells.size());
  for (std::size_t i = 0; i < one.cells.size(); ++i) {
    CHECK(one.cells[i].power == four.cells[i].power);
    CHECK(one.cells[i].critical == four.cells[i].critical);
  }
}

TEST_CASE("preset criticals bypass calibration") {
  ExperimentConfig config{BaseDistribution::cauchy()};
  config.n = 70;
  config.beta = 0.6;
  config.r_grid = {1.0};
  config.tests = {TestKind::MaxValue};
  config.null_reps = 0;  // would throw if calibration were attempted
  config.power_reps = 60;
  config.seed = 8;
  config.preset_criticals = {{TestKind::MaxValue, 70, 0.05, 123.5}};
  const PowerCurve curve = run_experiment(config);
  REQUIRE(curve.criticals.size() == 1);
  CHECK(curve.criticals[0].value == 123.5);
  CHECK(curve.cells[0].critical == 123.5);

  // A preset for the wrong n is ignored and calibration kicks in again.
  config.preset_criticals = {{TestKind::MaxValue, 71, 0.05, 123.5}};
  CHECK_THROWS_AS(run_experiment(config), std::invalid_argument);
}

TEST_CASE("cell failures are recorded rather than aborting the run") {
  ExperimentConfig config{BaseDistribution::normal()};
  config.n = 50;
  config.beta = 0.6;
  config.r_grid = {0.5, std::numeric_limits<double>::quiet_NaN()};
  config.tests = {TestKind::MaxValue, TestKind::BerkJones};
  config.null_reps = 150;
  config.power_reps = 40;
  config.seed = 3;
  const PowerCurve curve = run_experiment(config);
  CHECK(curve.cells.size() == 2);  // the valid r for each test
  REQUIRE(curve.failures.size() == 2);
  CHECK(!curve.failures[0].message.empty());
}

TEST_CASE("experiment validation") {
  ExperimentConfig config{BaseDistribution::normal()};
  config.n = 50;
  config.beta = 0.6;
  config.r_grid = {};
  config.tests = {TestKind::MaxValue};
  config.null_reps = 150;
  config.power_reps = 40;
  CHECK_THROWS_AS(run_experiment(config), std::invalid_argument);
  config.r_grid = {1.0};
  config.tests = {};
  CHECK_THROWS_AS(run_experiment(config), std::invalid_argument);
  config.tests = {TestKind::MaxValue};
  config.null_reps = 50;
  CHECK_THROWS_AS(run_experiment(config), std::invalid_argument);
}

}  // TEST_SUITE
