#include <doctest.h>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "sparsescan/oracle.hpp"
#include "test_helpers.hpp"

using namespace sparsescan;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

// Binomial tail via lgamma log-pmf summation in long double; independent
// of the incomplete-beta route and stable up to n in the thousands.
long double binom_tail_lgamma(int c, int n, long double p) {
  if (c <= 0) return 1.0L;
  if (c > n) return 0.0L;
  if (p <= 0.0L) return 0.0L;
  if (p >= 1.0L) return 1.0L;
  long double total = 0.0L;
  const long double lp = std::log(p);
  const long double lq = std::log1p(-p);
  for (int k = c; k <= n; ++k) {
    const long double lcoef = std::lgamma(static_cast<long double>(n + 1)) -
                              std::lgamma(static_cast<long double>(k + 1)) -
                              std::lgamma(static_cast<long double>(n - k + 1));
    total += std::exp(lcoef + k * lp + (n - k) * lq);
  }
  return total;
}

double mixture_upper_mass(const MixtureSpec& spec, double t) {
  return (1.0 - spec.epsilon) * spec.base.survival(t) +
         spec.epsilon * spec.base.survival(t - spec.mu);
}

double mixture_window_mass(const MixtureSpec& spec, double s, double t) {
  return mixture_upper_mass(spec, s) - mixture_upper_mass(spec, t);
}

}  // namespace

TEST_SUITE("oracle") {

TEST_CASE("fixed region power against the lgamma reference") {
  // Reference values for n = 1000, p = 0.01, q = 0.05, alpha = 0.05,
  // computed with 50-digit arithmetic: c = 16, power = 0.9999999966608045.
  const ExactPower got = exact_test_power(1000, 0.01, 0.05, 0.05);
  CHECK(got.critical_count == 16);
  CHECK(std::fabs(got.power - 0.9999999966608045) <= 1e-12);
  const double ref =
      static_cast<double>(binom_tail_lgamma(got.critical_count, 1000, 0.05L));
  CHECK(std::fabs(got.power - ref) <= 1e-12);

  // Small-n cross-check where the direct product sum is exact.
  const ExactPower small = exact_test_power(25, 0.2, 0.55, 0.05);
  CHECK(small.critical_count == testref::binom_critical(25, 0.2L, 0.05L));
  CHECK(std::fabs(small.power - static_cast<double>(testref::binom_tail(
                                    small.critical_count, 25, 0.55L))) <=
        1e-13);
}

TEST_CASE("fixed region power basic properties") {
  // Null alternative: the power is the level, which respects alpha.
  for (double p : {0.001, 0.02, 0.3, 0.5}) {
    const ExactPower ep = exact_test_power(200, p, p, 0.05);
    CHECK(ep.power <= 0.05 + 1e-14);
  }
  // Certain region under the alternative.
  CHECK(exact_test_power(100, 0.01, 1.0, 0.05).power == 1.0);
  // Power is monotone in the alternative mass.
  double prev = 0.0;
  for (int i = 0; i <= 20; ++i) {
    const double q = static_cast<double>(i) / 20.0;
    const double cur = exact_test_power(150, 0.05, q, 0.05).power;
    CHECK(cur >= prev - 1e-14);
    prev = cur;
  }
  CHECK_THROWS_AS(exact_test_power(100, 0.1, 1.5, 0.05), std::domain_error);
  CHECK_THROWS_AS(exact_test_power(100, 0.1, 0.2, 0.0), std::domain_error);
  CHECK_THROWS_AS(exact_test_power(100, 0.1, 0.2, 1.0), std::domain_error);
}

TEST_CASE("threshold oracle result invariants") {
  for (const auto& base :
       {BaseDistribution::normal(), BaseDistribution::cauchy()}) {
    const MixtureSpec spec(base, 300, 0.6, 1.0);
    const auto res = oracle_threshold_test(spec, 0.05);
    CHECK(res.kind == OracleKind::Threshold);
    CHECK(res.upper == kInf);
    CHECK(res.critical_count >= 1);
    CHECK(res.critical_count <= 301);
    CHECK(res.null_level <= 0.05 + 1e-14);
    CHECK(res.exact_power >= 0.0);
    CHECK(res.exact_power <= 1.0);
  }
}

TEST_CASE("threshold oracle with zero shift stays at the level") {
  // Only the light tailed families place the contamination at mu = 0 when
  // r = 0 (the power law convention n^(r/(a+1)) bottoms out at mu = 1),
  // so the exact null statement applies to them alone.
  for (const auto& base :
       {BaseDistribution::normal(), BaseDistribution::generalized_gaussian(0.7)}) {
    const MixtureSpec spec(base, 200, 0.7, 0.0);
    CHECK(oracle_threshold_test(spec, 0.05).exact_power <= 0.05 + 1e-12);
    CHECK(oracle_scan_test(spec, 0.05).exact_power <= 0.05 + 1e-12);
  }
  // Heavy tails at r = 0 keep a vestigial unit shift: the level constraint
  // still binds even though the oracle may pick up a little power.
  for (const auto& base :
       {BaseDistribution::cauchy(), BaseDistribution::student_t(0.5)}) {
    const MixtureSpec spec(base, 200, 0.7, 0.0);
    const auto thr = oracle_threshold_test(spec, 0.05);
    const auto scn = oracle_scan_test(spec, 0.05);
    CHECK(thr.null_level <= 0.05 + 1e-14);
    CHECK(scn.null_level <= 0.05 + 1e-14);
    CHECK(thr.exact_power >= thr.null_level - 1e-12);
    CHECK(thr.exact_power <= 0.2);
  }
}

TEST_CASE("threshold oracle dominates a dense threshold grid") {
  for (const auto& base :
       {BaseDistribution::normal(), BaseDistribution::cauchy()}) {
    for (double r : {0.3, 0.8, 1.5}) {
      const MixtureSpec spec(base, 120, 0.6, r);
      const auto res = oracle_threshold_test(spec, 0.05);
      double brute = 0.0;
      const int m = 4000;
      for (int j = 1; j <= m; ++j) {
        const double pq = static_cast<double>(j) / (m + 1);
        for (double t : {spec.base.quantile(pq), spec.base.quantile(pq) + spec.mu}) {
          const double p = spec.base.survival(t);
          const double q = mixture_upper_mass(spec, t);
          brute = std::max(brute, exact_test_power(spec.n, p, q, 0.05).power);
        }
      }
      CHECK(res.exact_power >= brute - 1e-12);
      CHECK(res.exact_power <= brute + 0.01);
    }
  }
}

TEST_CASE("threshold oracle power is monotone in the effect size") {
  for (const auto& base :
       {BaseDistribution::normal(), BaseDistribution::cauchy()}) {
    double prev = 0.0;
    for (int i = 0; i <= 12; ++i) {
      const double r = 2.0 * i / 12.0;
      const MixtureSpec spec(base, 400, 0.6, r);
      const double cur = oracle_threshold_test(spec, 0.05).exact_power;
      CHECK(cur >= prev - 1e-9);
      prev = cur;
    }
  }
}

TEST_CASE("scan oracle power is monotone in the effect size") {
  for (const auto& base :
       {BaseDistribution::normal(), BaseDistribution::cauchy()}) {
    double prev = 0.0;
    for (int i = 0; i <= 10; ++i) {
      const double r = 1.6 * i / 10.0;
      const MixtureSpec spec(base, 250, 0.65, r);
      const double cur = oracle_scan_test(spec, 0.05).exact_power;
      CHECK(cur >= prev - 1e-9);
      prev = cur;
    }
  }
}

TEST_CASE("heavy tail fixture reaches near-certain detection") {
  const MixtureSpec spec(BaseDistribution::cauchy(), 1000, 0.6, 2.0);
  const auto res = oracle_threshold_test(spec, 0.05);
  CHECK(res.exact_power >= 0.99);
}

TEST_CASE("scan oracle never falls below the threshold oracle") {
  const std::vector<MixtureSpec> specs = {
      {BaseDistribution::normal(), 200, 0.6, 0.5},
      {BaseDistribution::normal(), 200, 0.8, 1.2},
      {BaseDistribution::cauchy(), 300, 0.7, 0.8},
      {BaseDistribution::student_t(2.0), 150, 0.55, 0.4},
      {BaseDistribution::pareto(0.8), 250, 0.75, 1.0},
      {BaseDistribution::generalized_gaussian(0.7), 200, 0.65, 0.9},
  };
  for (const auto& spec : specs) {
    const double thr = oracle_threshold_test(spec, 0.05).exact_power;
    const double scn = oracle_scan_test(spec, 0.05).exact_power;
    CHECK(scn >= thr - 1e-12);
  }
}

TEST_CASE("scan oracle dominates a dense two-sided grid") {
  const MixtureSpec spec(BaseDistribution::cauchy(), 100, 0.7, 0.8);
  const auto res = oracle_scan_test(spec, 0.05);
  const int m = 220;
  std::vector<double> cuts;
  cuts.push_back(-kInf);
  for (int j = 1; j <= m; ++j) {
    const double pq = static_cast<double>(j) / (m + 1);
    cuts.push_back(spec.base.quantile(pq));
    cuts.push_back(spec.base.quantile(pq) + spec.mu);
  }
  std::sort(cuts.begin(), cuts.end());
  double brute = 0.0;
  for (std::size_t i = 0; i < cuts.size(); ++i) {
    const double s = cuts[i];
    const double upper_null = spec.base.survival(s);
    const double upper_mix = mixture_upper_mass(spec, s);
    for (std::size_t j = i; j <= cuts.size(); ++j) {
      double p, q;
      if (j == cuts.size()) {
        p = upper_null;
        q = upper_mix;
      } else {
        p = upper_null - spec.base.survival(cuts[j]);
        q = upper_mix - mixture_upper_mass(spec, cuts[j]);
      }
      p = std::min(std::max(p, 0.0), 1.0);
      q = std::min(std::max(q, 0.0), 1.0);
      brute = std::max(brute, exact_test_power(spec.n, p, q, 0.05).power);
    }
  }
  CHECK(res.exact_power >= brute - 1e-12);
  CHECK(res.exact_power <= brute + 0.02);
}

TEST_CASE("scan oracle localizes the contamination bump") {
  const MixtureSpec spec(BaseDistribution::cauchy(), 1000, 0.7, 0.8);
  const auto res = oracle_scan_test(spec, 0.05);
  CHECK(res.lower >= 0.5 * spec.mu);
  CHECK(res.lower <= 1.5 * spec.mu);
  CHECK(res.upper >= res.lower);
}

TEST_CASE("scan oracle is stable under sweep density") {
  const MixtureSpec spec(BaseDistribution::cauchy(), 500, 0.65, 0.6);
  ScanSearchOptions coarse;
  coarse.sweep_points = 192;
  ScanSearchOptions fine;
  fine.sweep_points = 768;
  const double a = oracle_scan_test(spec, 0.05, coarse).exact_power;
  const double b = oracle_scan_test(spec, 0.05, fine).exact_power;
  CHECK(std::fabs(a - b) < 1e-3);
}

TEST_CASE("oracles validate alpha") {
  const MixtureSpec spec(BaseDistribution::normal(), 100, 0.6, 1.0);
  CHECK_THROWS_AS(oracle_threshold_test(spec, 0.0), std::domain_error);
  CHECK_THROWS_AS(oracle_threshold_test(spec, 1.0), std::domain_error);
  CHECK_THROWS_AS(oracle_scan_test(spec, -0.1), std::domain_error);
  ScanSearchOptions bad;
  bad.sweep_points = 2;
  CHECK_THROWS_AS(oracle_scan_test(spec, 0.05, bad), std::invalid_argument);
}

}  // TEST_SUITE
