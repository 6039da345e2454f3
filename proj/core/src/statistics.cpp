#include "sparsescan/statistics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "sparsescan/numerics.hpp"

namespace sparsescan {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Survival values at the order statistics; nonincreasing in i because the
// sample is sorted ascending.
std::vector<double> survival_values(const Sample& sample,
                                    const BaseDistribution& base) {
  const auto& x = sample.values();
  std::vector<double> s(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) s[i] = base.survival(x[i]);
  return s;
}

TestStatisticResult hc_from_survivals(const std::vector<double>& s) {
  const int n = static_cast<int>(s.size());
  double best = -kInf;
  for (int i = 0; i < n; ++i) {
    const double sv = s[i];
    if (sv > 0.5) continue;  // tail mass above 1/2: excluded
    const double count = n - i;  // points at or above X_(i+1)
    const double z =
        (count - n * sv) / std::sqrt(n * sv * (1.0 - sv) + 1.0);
    if (z > best) best = z;
  }
  return {TestKind::HigherCriticism, best, std::nullopt,
          RejectDirection::Large};
}

TestStatisticResult bj_from_survivals(const std::vector<double>& s) {
  const int n = static_cast<int>(s.size());
  // Ascending tail-uniforms: U_(i) = survival of the (n+1-i)-th order stat.
  double best_log = kInf;
  for (int i = 1; i <= n; ++i) {
    const double u = s[static_cast<std::size_t>(n - i)];
    const double lp = log_reg_inc_beta(u, static_cast<double>(i),
                                       static_cast<double>(n - i + 1));
    if (lp < best_log) best_log = lp;
  }
  return {TestKind::BerkJones, std::exp(best_log), best_log,
          RejectDirection::Small};
}

TestStatisticResult stouffer_from_survivals(const std::vector<double>& s) {
  const int n = static_cast<int>(s.size());
  double best = -kInf;
  // Windows sharing a count c = d+1 form one diagonal; the cell value is
  // strictly decreasing in the window's null mass on [0, 1/2], so only the
  // thinnest window of each diagonal can attain the maximum.
  for (int d = 0; d < n; ++d) {
    double pmin = kInf;
    for (int i = 0; i + d < n; ++i) {
      const double mass = s[i] - s[i + d];
      if (mass < pmin) pmin = mass;
    }
    if (pmin > 0.5) continue;
    if (pmin < 0.0) pmin = 0.0;  // equal survivals can round negative
    const double count = d + 1;
    const double z =
        (count - n * pmin) / std::sqrt(n * pmin * (1.0 - pmin) + 1.0);
    if (z > best) best = z;
  }
  return {TestKind::StoufferScan, best, std::nullopt, RejectDirection::Large};
}

TestStatisticResult tippett_from_survivals(const std::vector<double>& s) {
  const int n = static_cast<int>(s.size());
  if (n < 2)
    throw std::invalid_argument("tippett_scan_stat: needs at least 2 points");
  // Ascending tail-uniforms; the pair (i, j) covers the spacing
  // U_(j) - U_(i) with beta parameters (j-i, n-j+i+1).  For a fixed gap the
  // beta cdf is increasing in the spacing, so only the smallest spacing per
  // gap matters.
  std::vector<double> u(s.rbegin(), s.rend());
  double best_log = kInf;
  for (int d = 1; d < n; ++d) {
    double vmin = kInf;
    for (int i = 0; i + d < n; ++i) {
      const double spacing = u[i + d] - u[i];
      if (spacing < vmin) vmin = spacing;
    }
    if (vmin < 0.0) vmin = 0.0;
    const double lp = log_reg_inc_beta(vmin, static_cast<double>(d),
                                       static_cast<double>(n - d + 1));
    if (lp < best_log) best_log = lp;
  }
  return {TestKind::TippettScan, std::exp(best_log), best_log,
          RejectDirection::Small};
}

}  // namespace

RejectDirection reject_direction(TestKind kind) {
  switch (kind) {
    case TestKind::BerkJones:
    case TestKind::TippettScan:
      return RejectDirection::Small;
    default:
      return RejectDirection::Large;
  }
}

std::string_view test_name(TestKind kind) {
  switch (kind) {
    case TestKind::HigherCriticism:
      return "hc";
    case TestKind::BerkJones:
      return "bj";
    case TestKind::MaxValue:
      return "max";
    case TestKind::StoufferScan:
      return "stouffer_scan";
    case TestKind::TippettScan:
      return "tippett_scan";
  }
  return "?";
}

std::optional<TestKind> test_from_name(std::string_view name) {
  for (TestKind k : kAllTests)
    if (test_name(k) == name) return k;
  return std::nullopt;
}

TestStatisticResult hc_threshold_stat(const Sample& sample,
                                      const BaseDistribution& base) {
  return hc_from_survivals(survival_values(sample, base));
}

TestStatisticResult bj_stat(const Sample& sample,
                            const BaseDistribution& base) {
  return bj_from_survivals(survival_values(sample, base));
}

TestStatisticResult max_stat(const Sample& sample) {
  return {TestKind::MaxValue, sample.values().back(), std::nullopt,
          RejectDirection::Large};
}

TestStatisticResult stouffer_scan_stat(const Sample& sample,
                                       const BaseDistribution& base) {
  return stouffer_from_survivals(survival_values(sample, base));
}

TestStatisticResult tippett_scan_stat(const Sample& sample,
                                      const BaseDistribution& base) {
  return tippett_from_survivals(survival_values(sample, base));
}

std::vector<TestStatisticResult> compute_statistics(
    const Sample& sample, const BaseDistribution& base,
    const std::vector<TestKind>& tests) {
  std::vector<double> s;
  std::vector<TestStatisticResult> out;
  out.reserve(tests.size());
  for (TestKind k : tests) {
    if (k != TestKind::MaxValue && s.empty())
      s = survival_values(sample, base);
    switch (k) {
      case TestKind::HigherCriticism:
        out.push_back(hc_from_survivals(s));
        break;
      case TestKind::BerkJones:
        out.push_back(bj_from_survivals(s));
        break;
      case TestKind::MaxValue:
        out.push_back(max_stat(sample));
        break;
      case TestKind::StoufferScan:
        out.push_back(stouffer_from_survivals(s));
        break;
      case TestKind::TippettScan:
        out.push_back(tippett_from_survivals(s));
        break;
    }
  }
  return out;
}

}  // namespace sparsescan
