#pragma once

namespace sparsescan {

// Plain doubles with documented ranges rather than wrapper types.
// A Probability lives in [0,1]; a LogProbability is the natural log of a
// probability, i.e. <= 0, with -inf standing for probability zero.
using Probability = double;
using LogProbability = double;

// Regularized incomplete beta function B(u; a, b), the cdf at u of a
// Beta(a, b) variable.  Continued-fraction evaluation, absolute accuracy
// around 1e-15.  Throws std::domain_error for u outside [0,1] or
// non-positive a, b.
Probability reg_inc_beta(double u, double a, double b);

// log of reg_inc_beta, computed without underflow.  The value is exact in
// log space even when the probability itself is far below the smallest
// double (needed for the scan statistic, whose p-values reach exp(-10^5)).
LogProbability log_reg_inc_beta(double u, double a, double b);

// Inverse of u -> reg_inc_beta(u, a, b).  Halley iteration with a bisection
// fallback; |reg_inc_beta(result) - y| stays below ~1e-12.
double reg_inc_beta_inv(Probability y, double a, double b);

// Regularized incomplete gamma functions P(s, x) and Q(s, x) = 1 - P(s, x)
// (series / continued fraction).  Used by the generalized gaussian cdf.
double reg_lower_gamma(double s, double x);
double reg_upper_gamma(double s, double x);

// log Beta(a, b) normalization constant.
double log_beta(double a, double b);

// Upper tail P(Bin(n, p) >= c) for c in {0, ..., n+1}; c = 0 gives 1 and
// c = n+1 gives 0.  For 1 <= c <= n this equals reg_inc_beta(p, c, n-c+1).
Probability binom_sf(int c, int n, Probability p);

// Smallest count c in {0, ..., n+1} with binom_sf(c, n, p) <= alpha.
// n+1 encodes "never reject" (possible when alpha is unattainable).
// Note that for alpha < 1 the result is always >= 1, since the whole-sample
// region has null probability exactly 1.
int binom_critical(int n, Probability p, double alpha);

// Closed-form upper bound on the beta cdf B(u; k, n-k+1) for 0 <= u <= k/n:
//   exp( -((k - nu)^2 / 2) / (nu(1-u) + (k - nu)/3) ).
// Bernstein-type; equals 1 at u = k/n and exp(-3k/2) at u = 0.
Probability bernstein_beta_bound(double u, int k, int n);

}  // namespace sparsescan
