#include "sparsescan/boundaries.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace sparsescan {

namespace {

void check_beta(double beta, const char* who) {
  if (!(beta > 0.5 && beta < 1.0))
    throw std::domain_error(std::string(who) +
                            ": beta must lie in (1/2, 1)");
}

void check_shape(double a, const char* who) {
  if (!(a > 0.0))
    throw std::domain_error(std::string(who) + ": a must be positive");
}

}  // namespace

double ingster_boundary(double beta) {
  check_beta(beta, "ingster_boundary");
  if (beta <= 0.75) return beta - 0.5;
  const double s = 1.0 - std::sqrt(1.0 - beta);
  return s * s;
}

double gg_threshold_boundary(double a, double beta) {
  check_shape(a, "gg_threshold_boundary");
  check_beta(beta, "gg_threshold_boundary");
  if (a <= 1.0) return 2.0 * (beta - 0.5);
  const double knee = 1.0 - std::pow(2.0, -a / (a - 1.0));
  if (beta < knee) {
    const double coef = std::pow(std::pow(2.0, 1.0 / (a - 1.0)) - 1.0, a - 1.0);
    return coef * (beta - 0.5);
  }
  return std::pow(1.0 - std::pow(1.0 - beta, 1.0 / a), a);
}

double gg_max_boundary(double a, double beta) {
  check_shape(a, "gg_max_boundary");
  check_beta(beta, "gg_max_boundary");
  return std::pow(1.0 - std::pow(1.0 - beta, 1.0 / a), a);
}

double omega_boundary(const std::function<double(double)>& omega,
                      double beta) {
  check_beta(beta, "omega_boundary");
  if (!omega) throw std::invalid_argument("omega_boundary: empty omega");
  if (std::fabs(omega(1.0)) > 1e-9)
    throw std::invalid_argument("omega_boundary: omega(1) must be 0");
  // The rate function must not increase; sample a grid to catch misuse.
  {
    double prev = omega(1.0 / 64.0);
    for (int i = 2; i <= 64; ++i) {
      const double cur = omega(static_cast<double>(i) / 64.0);
      if (cur > prev + 1e-9)
        throw std::invalid_argument("omega_boundary: omega must be nonincreasing");
      prev = cur;
    }
  }

  const double hmax = 1.0 - beta;
  const auto objective = [&](double h) {
    return omega(h) - omega(2.0 * beta - 1.0 + 2.0 * h);
  };

  // Bracket on a linear grid (plus log-spaced points near 0, where rate
  // functions like log(1/v) blow up), then golden section.
  std::vector<double> hs;
  for (int k = 6; k >= 1; --k) hs.push_back(hmax * std::pow(10.0, -k));
  constexpr int kGridPoints = 128;
  for (int i = 1; i <= kGridPoints; ++i)
    hs.push_back(hmax * static_cast<double>(i) / kGridPoints);

  std::size_t best_i = 0;
  double best_v = objective(hs[0]);
  for (std::size_t i = 1; i < hs.size(); ++i) {
    const double v = objective(hs[i]);
    if (v < best_v) {
      best_v = v;
      best_i = i;
    }
  }

  double lo = (best_i == 0) ? hs[0] * 0.1 : hs[best_i - 1];
  double hi = (best_i + 1 == hs.size()) ? hs.back() : hs[best_i + 1];
  constexpr double kGolden = 0.6180339887498949;
  double x1 = hi - kGolden * (hi - lo);
  double x2 = lo + kGolden * (hi - lo);
  double f1 = objective(x1);
  double f2 = objective(x2);
  while (hi - lo > 1e-8) {
    if (f1 > f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + kGolden * (hi - lo);
      f2 = objective(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - kGolden * (hi - lo);
      f1 = objective(x1);
    }
  }
  double result = std::min({best_v, f1, f2, objective(hmax)});
  // Nonincreasing omega makes the objective nonnegative; clip fp dust.
  return std::max(result, 0.0);
}

double power_law_scan_boundary(double beta) {
  check_beta(beta, "power_law_scan_boundary");
  return 2.0 * beta - 1.0;
}

double power_law_threshold_boundary(double a, double beta) {
  check_shape(a, "power_law_threshold_boundary");
  check_beta(beta, "power_law_threshold_boundary");
  return (1.0 + 1.0 / a) * (2.0 * beta - 1.0);
}

BoundaryCurve make_boundary_curve(std::string_view name,
                                  std::optional<double> a) {
  const auto need_a = [&](const char* curve) {
    if (!a)
      throw std::invalid_argument(std::string(curve) +
                                  " requires the shape parameter a");
    return *a;
  };
  // Evaluators are extended continuously to beta = 1/2 so curve plots can
  // start at the left edge of the sparse regime.
  if (name == "ingster") {
    return {"ingster", [](double beta) {
              return beta == 0.5 ? 0.0 : ingster_boundary(beta);
            }};
  }
  if (name == "gg-threshold") {
    const double shape = need_a("gg-threshold");
    check_shape(shape, "gg-threshold");
    return {"gg-threshold", [shape](double beta) {
              return beta == 0.5 ? 0.0 : gg_threshold_boundary(shape, beta);
            }};
  }
  if (name == "gg-max") {
    const double shape = need_a("gg-max");
    check_shape(shape, "gg-max");
    return {"gg-max", [shape](double beta) {
              if (beta == 0.5)
                return std::pow(1.0 - std::pow(0.5, 1.0 / shape), shape);
              return gg_max_boundary(shape, beta);
            }};
  }
  if (name == "omega-gumbel") {
    // Gumbel-type rate omega(v) = log(1/v); the infimum lands on the
    // endpoint and gives -log(1-beta).
    return {"omega-gumbel", [](double beta) {
              if (beta == 0.5) return std::log(2.0);
              return omega_boundary([](double v) { return std::log(1.0 / v); },
                                    beta);
            }};
  }
  if (name == "pl-scan") {
    return {"pl-scan", [](double beta) {
              return beta == 0.5 ? 0.0 : power_law_scan_boundary(beta);
            }};
  }
  if (name == "pl-threshold") {
    const double shape = need_a("pl-threshold");
    check_shape(shape, "pl-threshold");
    return {"pl-threshold", [shape](double beta) {
              return beta == 0.5 ? 0.0
                                 : power_law_threshold_boundary(shape, beta);
            }};
  }
  throw std::invalid_argument("unknown boundary curve: " + std::string(name));
}

}  // namespace sparsescan
