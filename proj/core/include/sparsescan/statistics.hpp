#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "sparsescan/distributions.hpp"

namespace sparsescan {

enum class TestKind {
  HigherCriticism,
  BerkJones,
  MaxValue,
  StoufferScan,
  TippettScan,
};

inline constexpr TestKind kAllTests[] = {
    TestKind::HigherCriticism, TestKind::BerkJones, TestKind::MaxValue,
    TestKind::StoufferScan, TestKind::TippettScan};

enum class RejectDirection { Large, Small };

RejectDirection reject_direction(TestKind kind);
std::string_view test_name(TestKind kind);
std::optional<TestKind> test_from_name(std::string_view name);

struct TestStatisticResult {
  TestKind kind;
  double value;
  // log of the statistic for the beta-cdf based tests (their values
  // underflow under strong signal); when present, value = exp(log_value)
  // up to underflow.
  std::optional<double> log_value;
  RejectDirection direction;
};

// Threshold-count statistic: over thresholds t at the sample points whose
// tail mass satisfies survival(t) <= 1/2, the standardized exceedance count
//   (N(t) - n survival(t)) / sqrt(n cdf(t) survival(t) + 1),
// where N(t) = #{X_i >= t}.  The mass cap mirrors the scan's window
// restriction.  -inf when no sample point is admissible.
TestStatisticResult hc_threshold_stat(const Sample& sample,
                                      const BaseDistribution& base);

// Minimum over i of B(U_(i); i, n-i+1) with U_i = survival(X_i): the
// smallest beta-cdf p-value of an order statistic of the tail-uniforms.
TestStatisticResult bj_stat(const Sample& sample, const BaseDistribution& base);

// Largest observation.
TestStatisticResult max_stat(const Sample& sample);

// Window-count statistic: over windows [X_(i), X_(j)] with null mass
// p <= 1/2, the standardized count (j-i+1 - np) / sqrt(np(1-p) + 1).
// O(n^2) time, O(n) extra space.
TestStatisticResult stouffer_scan_stat(const Sample& sample,
                                       const BaseDistribution& base);

// Minimum over strict pairs i < j of B(U_(j) - U_(i); j-i, n-j+i+1),
// evaluated in log space.  Requires n >= 2.  O(n^2) time, O(n) space.
TestStatisticResult tippett_scan_stat(const Sample& sample,
                                      const BaseDistribution& base);

// Evaluates several statistics on one sample, sharing the survival values.
std::vector<TestStatisticResult> compute_statistics(
    const Sample& sample, const BaseDistribution& base,
    const std::vector<TestKind>& tests);

}  // namespace sparsescan
