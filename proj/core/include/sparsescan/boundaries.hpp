#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace sparsescan {

// Detection boundaries r*(beta) on the sparsity/effect-size plane: below
// the curve no test can separate the mixture from the null asymptotically,
// above it the corresponding test can.  All take beta in the open interval
// (1/2, 1) and throw std::domain_error outside it.

// Threshold-test boundary for the normal base:
// beta - 1/2 on (1/2, 3/4], (1 - sqrt(1-beta))^2 on (3/4, 1).
double ingster_boundary(double beta);

// Threshold-test boundary for the generalized gaussian base with exponent a.
// For a > 1 it pieces a linear segment below beta = 1 - 2^(-a/(a-1)) onto
// (1 - (1-beta)^(1/a))^a above; for a <= 1 it is 2(beta - 1/2).
// gg_threshold_boundary(2, .) coincides with ingster_boundary.
double gg_threshold_boundary(double a, double beta);

// Max-test boundary for the generalized gaussian base:
// (1 - (1-beta)^(1/a))^a on the whole interval.
double gg_max_boundary(double a, double beta);

// Boundary for a base given through its rate function omega on (0, 1]
// (nonincreasing, omega(1) = 0):
//   r*(beta) = inf over 0 < h <= 1-beta of omega(h) - omega(2 beta - 1 + 2h).
// Numeric infimum (grid bracket + golden section, h refined to 1e-8); the
// endpoint h = 1-beta is admissible and recovers the max-test boundary
// omega(1-beta).  Throws std::invalid_argument if omega increases or fails
// omega(1) = 0.
double omega_boundary(const std::function<double(double)>& omega, double beta);

// Window-test boundary for power-law tailed bases: 2 beta - 1, independent
// of the tail exponent.
double power_law_scan_boundary(double beta);

// Threshold-test boundary for power-law tailed bases with tail exponent a:
// (1 + 1/a)(2 beta - 1).
double power_law_threshold_boundary(double a, double beta);

// A named curve for plotting and CSV output.  Known names:
//   ingster, gg-threshold, gg-max, omega-gumbel, pl-scan, pl-threshold
// gg-threshold, gg-max and pl-threshold require the shape parameter a.
// Evaluators extend continuously to beta = 1/2 (the plotting convention);
// beta >= 1 stays out of domain.
struct BoundaryCurve {
  std::string name;
  std::function<double(double)> evaluate;
};

BoundaryCurve make_boundary_curve(std::string_view name,
                                  std::optional<double> a = std::nullopt);

}  // namespace sparsescan
