#include "sparsescan/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace sparsescan {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_alpha(double alpha, const char* who) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::domain_error(std::string(who) + ": alpha must lie in (0,1)");
}

// Largest region mass at which a c-count test keeps level <= alpha;
// always admissible (binom_sf(c, n, mass) <= alpha).
double admissible_mass(int c, int n, double alpha) {
  double x = reg_inc_beta_inv(alpha, static_cast<double>(c),
                              static_cast<double>(n - c + 1));
  if (binom_sf(c, n, x) <= alpha) return x;
  double lo = x * (1.0 - 1e-6);
  double hi = x;
  if (binom_sf(c, n, lo) > alpha) lo = 0.0;
  for (int it = 0; it < 100; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (binom_sf(c, n, mid) <= alpha)
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

// P_c for c = 1..n, shared by both oracle searches.
class CriticalTable {
 public:
  CriticalTable(int n, double alpha) : n_(n), alpha_(alpha), p_upper_(n) {
    for (int c = 1; c <= n; ++c) {
      double p = admissible_mass(c, n, alpha);
      if (c >= 2 && p < p_upper_[c - 2]) p = p_upper_[c - 2];
      p_upper_[c - 1] = p;
    }
  }

  int n() const { return n_; }
  double upper_mass(int c) const { return p_upper_[c - 1]; }

  // Smallest count whose test has level <= alpha on a region of mass p.
  int critical_for(Probability p) const {
    auto it = std::lower_bound(p_upper_.begin(), p_upper_.end(), p);
    int c = static_cast<int>(it - p_upper_.begin()) + 1;
    while (c <= n_ && binom_sf(c, n_, p) > alpha_) ++c;
    while (c > 1 && binom_sf(c - 1, n_, p) <= alpha_) --c;
    return c;
  }

 private:
  int n_;
  double alpha_;
  std::vector<double> p_upper_;
};

struct Candidate {
  double s = kInf;
  double t = kInf;
  int c = 0;
  double mass = 0.0;
  double q = 0.0;
  double power = -1.0;
  double null_level = 0.0;
};

// power descending, then lexicographically smallest region.
bool improves(const Candidate& cand, const Candidate& best) {
  if (cand.power != best.power) return cand.power > best.power;
  if (cand.s != best.s) return cand.s < best.s;
  return cand.t < best.t;
}

Candidate best_threshold(const MixtureSpec& spec, double alpha,
                         const CriticalTable& table) {
  const int n = spec.n;
  Candidate best;
  for (int c = 1; c <= n; ++c) {
    const double pc = table.upper_mass(c);
    if (!(pc > 0.0) || pc >= 1.0) continue;
    const double t = spec.base.quantile(1.0 - pc);
    const double q =
        (1.0 - spec.epsilon) * pc +
        spec.epsilon * spec.base.survival(t - spec.mu);
    Candidate cand{t, kInf, c, pc, q, binom_sf(c, n, q), binom_sf(c, n, pc)};
    if (improves(cand, best)) best = cand;
  }
  return best;
}

OracleTestResult to_result(OracleKind kind, const Candidate& cand) {
  return {kind, cand.s, cand.t, cand.c, cand.power, cand.null_level};
}

}  // namespace

ExactPower exact_test_power(int n, Probability p, Probability q,
                            double alpha) {
  if (!(q >= 0.0 && q <= 1.0))
    throw std::domain_error("exact_test_power: q must lie in [0,1]");
  const int c = binom_critical(n, p, alpha);  // validates n, p, alpha
  return {c, binom_sf(c, n, q)};
}

OracleTestResult oracle_threshold_test(const MixtureSpec& spec, double alpha) {
  check_alpha(alpha, "oracle_threshold_test");
  const CriticalTable table(spec.n, alpha);
  const Candidate best = best_threshold(spec, alpha, table);
  return to_result(OracleKind::Threshold, best);
}

OracleTestResult oracle_scan_test(const MixtureSpec& spec, double alpha,
                                  const ScanSearchOptions& options) {
  check_alpha(alpha, "oracle_scan_test");
  if (options.sweep_points < 16)
    throw std::invalid_argument("oracle_scan_test: sweep_points too small");
  const int n = spec.n;
  const auto& base = spec.base;
  const double eps = spec.epsilon;
  const double mu = spec.mu;
  const CriticalTable table(n, alpha);

  // Half-line optima are threshold optima; seed the search with them so the
  // scan result dominates the threshold result by construction.
  Candidate best = best_threshold(spec, alpha, table);

  // Shared left-endpoint grid: quantile-equispaced plus a copy shifted to
  // where the contamination lives.
  const int m = options.sweep_points;
  std::vector<double> grid;
  grid.reserve(2 * static_cast<std::size_t>(m));
  for (int j = 1; j <= m; ++j) {
    const double x = base.quantile(1.0 - static_cast<double>(j) / (m + 1));
    grid.push_back(x);
    grid.push_back(mu + x);
  }
  std::sort(grid.begin(), grid.end());

  // For a window with count c and left end s, the right end spending the
  // full budget B = P_c is t(s) with survival(s) - survival(t) = B.
  for (int c = 1; c <= n; ++c) {
    const double budget = table.upper_mass(c);
    if (!(budget > 0.0) || budget >= 1.0) continue;

    // No window of this count can beat the current best: skip.
    const double q_cap = (1.0 - eps) * budget + eps;
    if (binom_sf(c, n, q_cap) < best.power) continue;

    const double null_level = binom_sf(c, n, budget);

    const auto window_q = [&](double s) {
      const double fs = base.survival(s);
      const double slack = fs - budget;
      if (!(slack > 0.0)) return -1.0;  // half-line regime; handled above
      const double t = base.quantile(1.0 - std::min(slack, 1.0 - 1e-16));
      return (1.0 - eps) * budget +
             eps * (base.survival(s - mu) - base.survival(t - mu));
    };
    const auto record = [&](double s) {
      const double fs = base.survival(s);
      const double slack = fs - budget;
      if (!(slack > 0.0)) return;
      const double t = base.quantile(1.0 - std::min(slack, 1.0 - 1e-16));
      const double q = (1.0 - eps) * budget +
                       eps * (base.survival(s - mu) - base.survival(t - mu));
      Candidate cand{s, t, c, budget, q, binom_sf(c, n, q), null_level};
      if (improves(cand, best)) best = cand;
    };

    // Coarse sweep over grid points left of the budget edge, plus a few
    // near-edge candidates where the window is about to open into a
    // half-line.
    std::vector<double> svals;
    std::vector<double> qvals;
    for (double s : grid) {
      const double q = window_q(s);
      if (q < 0.0) break;  // survival only shrinks as s grows
      svals.push_back(s);
      qvals.push_back(q);
    }
    for (double frac : {0.25, 0.5, 1.0, 2.0, 4.0}) {
      const double mass = budget * (1.0 + frac);
      if (mass >= 1.0) continue;
      const double s = base.quantile(1.0 - mass);
      const double q = window_q(s);
      if (q >= 0.0) {
        svals.push_back(s);
        qvals.push_back(q);
      }
    }
    if (svals.empty()) continue;

    // Pick local maxima of the sweep and polish each by golden section.
    std::vector<std::size_t> basins;
    for (std::size_t i = 0; i < svals.size(); ++i) {
      const bool left_ok = (i == 0) || (qvals[i] >= qvals[i - 1]);
      const bool right_ok =
          (i + 1 == svals.size()) || (qvals[i] >= qvals[i + 1]);
      if (left_ok && right_ok) basins.push_back(i);
    }
    std::sort(basins.begin(), basins.end(), [&](std::size_t a, std::size_t b) {
      return qvals[a] > qvals[b];
    });
    if (static_cast<int>(basins.size()) > options.refine_basins)
      basins.resize(static_cast<std::size_t>(options.refine_basins));

    constexpr double kGolden = 0.6180339887498949;
    for (std::size_t idx : basins) {
      double lo = (idx == 0) ? svals[0] : svals[idx - 1];
      double hi = (idx + 1 == svals.size()) ? svals.back() : svals[idx + 1];
      record(svals[idx]);
      if (!(hi > lo)) continue;
      double x1 = hi - kGolden * (hi - lo);
      double x2 = lo + kGolden * (hi - lo);
      double q1 = window_q(x1);
      double q2 = window_q(x2);
      for (int it = 0; it < 120; ++it) {
        if (q1 < q2) {
          lo = x1;
          x1 = x2;
          q1 = q2;
          x2 = lo + kGolden * (hi - lo);
          q2 = window_q(x2);
        } else {
          hi = x2;
          x2 = x1;
          q2 = q1;
          x1 = hi - kGolden * (hi - lo);
          q1 = window_q(x1);
        }
        if (hi - lo < 1e-12 * (std::fabs(lo) + std::fabs(hi) + 1e-6)) break;
      }
      record(0.5 * (lo + hi));
    }
  }

  return to_result(OracleKind::Scan, best);
}

}  // namespace sparsescan
