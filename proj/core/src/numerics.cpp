#include "sparsescan/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace sparsescan {

namespace {

constexpr double kTiny = 1e-300;
constexpr double kCfEps = 1e-16;
constexpr int kMaxIter = 800;

// Continued fraction for the incomplete beta (Lentz's method).  Converges
// quickly for u below the pivot (a+1)/(a+b+2); callers switch to the
// symmetric form above it.
double betacf(double u, double a, double b) {
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * u / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * u / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * u / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kCfEps) break;
  }
  return h;
}

void check_beta_args(double u, double a, double b, const char* who) {
  if (!(a > 0.0) || !(b > 0.0))
    throw std::domain_error(std::string(who) + ": a and b must be positive");
  if (!(u >= 0.0 && u <= 1.0))
    throw std::domain_error(std::string(who) + ": u must lie in [0,1]");
}

}  // namespace

double log_beta(double a, double b) {
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

Probability reg_inc_beta(double u, double a, double b) {
  check_beta_args(u, a, b, "reg_inc_beta");
  if (u == 0.0) return 0.0;
  if (u == 1.0) return 1.0;
  const double lfront =
      a * std::log(u) + b * std::log1p(-u) - log_beta(a, b);
  if (u < (a + 1.0) / (a + b + 2.0)) {
    return std::exp(lfront) * betacf(u, a, b) / a;
  }
  return 1.0 - std::exp(lfront) * betacf(1.0 - u, b, a) / b;
}

LogProbability log_reg_inc_beta(double u, double a, double b) {
  check_beta_args(u, a, b, "log_reg_inc_beta");
  if (u == 0.0) return -std::numeric_limits<double>::infinity();
  if (u == 1.0) return 0.0;
  const double lfront =
      a * std::log(u) + b * std::log1p(-u) - log_beta(a, b);
  if (u < (a + 1.0) / (a + b + 2.0)) {
    // Direct regime: the continued fraction itself is O(1), so the log of
    // the product is exact no matter how small the prefactor is.
    return lfront - std::log(a) + std::log(betacf(u, a, b));
  }
  // Above the pivot the value is bounded away from 0; go through the
  // complement, which the symmetric continued fraction handles.
  const double complement = std::exp(lfront) * betacf(1.0 - u, b, a) / b;
  return std::log1p(-complement);
}

double reg_inc_beta_inv(Probability y, double a, double b) {
  check_beta_args(0.5, a, b, "reg_inc_beta_inv");
  if (!(y >= 0.0 && y <= 1.0))
    throw std::domain_error("reg_inc_beta_inv: y must lie in [0,1]");
  if (y == 0.0) return 0.0;
  if (y == 1.0) return 1.0;
  // Solve the smaller tail: near zero the double grid is logarithmically
  // dense, near one it is not, so accuracy lives on the left.
  if (y > 0.5) return 1.0 - reg_inc_beta_inv(1.0 - y, b, a);

  // Initial guess: normal approximation for a,b >= 1, leading-term power
  // law otherwise (both standard).
  double x;
  if (a >= 1.0 && b >= 1.0) {
    const double pp = (y < 0.5) ? y : 1.0 - y;
    const double t = std::sqrt(-2.0 * std::log(pp));
    double xg =
        (2.30753 + t * 0.27061) / (1.0 + t * (0.99229 + t * 0.04481)) - t;
    if (y < 0.5) xg = -xg;
    const double al = (xg * xg - 3.0) / 6.0;
    const double h = 2.0 / (1.0 / (2.0 * a - 1.0) + 1.0 / (2.0 * b - 1.0));
    const double w =
        xg * std::sqrt(al + h) / h -
        (1.0 / (2.0 * b - 1.0) - 1.0 / (2.0 * a - 1.0)) *
            (al + 5.0 / 6.0 - 2.0 / (3.0 * h));
    x = a / (a + b * std::exp(2.0 * w));
  } else {
    const double lna = std::log(a / (a + b));
    const double lnb = std::log(b / (a + b));
    const double t = std::exp(a * lna) / a;
    const double u = std::exp(b * lnb) / b;
    const double w = t + u;
    if (y < t / w)
      x = std::pow(a * w * y, 1.0 / a);
    else
      x = 1.0 - std::pow(b * w * (1.0 - y), 1.0 / b);
  }
  x = std::clamp(x, 1e-300, 1.0 - 1e-16);

  // Halley iteration on reg_inc_beta(x) - y.
  const double afac = -log_beta(a, b);
  for (int it = 0; it < 24; ++it) {
    const double err = reg_inc_beta(x, a, b) - y;
    const double lpdf =
        (a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x) + afac;
    double step = err / std::exp(lpdf);
    const double halley =
        1.0 - 0.5 * std::min(1.0, step * ((a - 1.0) / x - (b - 1.0) / (1.0 - x)));
    step /= halley;
    double xn = x - step;
    if (xn <= 0.0) xn = 0.5 * x;
    if (xn >= 1.0) xn = 0.5 * (x + 1.0);
    const bool converged = std::fabs(xn - x) < 1e-15 * (x + 1e-300);
    x = xn;
    if (converged && it > 0) break;
  }

  // Bisection fallback for the rare case Halley stalls (extreme shapes).
  if (std::fabs(reg_inc_beta(x, a, b) - y) > 1e-11) {
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid == lo || mid == hi) break;
      if (reg_inc_beta(mid, a, b) < y)
        lo = mid;
      else
        hi = mid;
    }
    x = 0.5 * (lo + hi);
  }
  return x;
}

namespace {

// Regularized lower incomplete gamma by series (x < s+1).
double gamma_series(double s, double x) {
  double ap = s;
  double sum = 1.0 / s;
  double del = sum;
  for (int i = 0; i < kMaxIter; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::fabs(del) < std::fabs(sum) * kCfEps) break;
  }
  return sum * std::exp(-x + s * std::log(x) - std::lgamma(s));
}

// Regularized upper incomplete gamma by continued fraction (x >= s+1).
double gamma_cf(double s, double x) {
  double b = x + 1.0 - s;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= kMaxIter; ++i) {
    const double an = -i * (i - s);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kCfEps) break;
  }
  return h * std::exp(-x + s * std::log(x) - std::lgamma(s));
}

}  // namespace

double reg_lower_gamma(double s, double x) {
  if (!(s > 0.0)) throw std::domain_error("reg_lower_gamma: s must be positive");
  if (!(x >= 0.0)) throw std::domain_error("reg_lower_gamma: x must be >= 0");
  if (x == 0.0) return 0.0;
  return (x < s + 1.0) ? gamma_series(s, x) : 1.0 - gamma_cf(s, x);
}

double reg_upper_gamma(double s, double x) {
  if (!(s > 0.0)) throw std::domain_error("reg_upper_gamma: s must be positive");
  if (!(x >= 0.0)) throw std::domain_error("reg_upper_gamma: x must be >= 0");
  if (x == 0.0) return 1.0;
  return (x < s + 1.0) ? 1.0 - gamma_series(s, x) : gamma_cf(s, x);
}

Probability binom_sf(int c, int n, Probability p) {
  if (n < 1) throw std::domain_error("binom_sf: n must be >= 1");
  if (!(p >= 0.0 && p <= 1.0))
    throw std::domain_error("binom_sf: p must lie in [0,1]");
  if (c < 0 || c > n + 1)
    throw std::domain_error("binom_sf: count must lie in [0, n+1]");
  if (c == 0) return 1.0;
  if (c == n + 1) return 0.0;
  // P(Bin(n,p) >= c) = B(p; c, n-c+1): the chance that the c-th smallest of
  // n uniforms falls below p.
  return reg_inc_beta(p, static_cast<double>(c), static_cast<double>(n - c + 1));
}

int binom_critical(int n, Probability p, double alpha) {
  if (n < 1) throw std::domain_error("binom_critical: n must be >= 1");
  if (!(p >= 0.0 && p <= 1.0))
    throw std::domain_error("binom_critical: p must lie in [0,1]");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::domain_error("binom_critical: alpha must lie in (0,1)");
  // binom_sf is nonincreasing in c and reaches 0 at c = n+1, so the first
  // admissible count exists and binary search finds it.
  int lo = 0, hi = n + 1;
  while (lo < hi) {
    const int mid = lo + (hi - lo) / 2;
    if (binom_sf(mid, n, p) <= alpha)
      hi = mid;
    else
      lo = mid + 1;
  }
  return lo;
}

Probability bernstein_beta_bound(double u, int k, int n) {
  if (n < 1) throw std::domain_error("bernstein_beta_bound: n must be >= 1");
  if (k < 0 || k > n)
    throw std::domain_error("bernstein_beta_bound: k must lie in [0, n]");
  if (!(u >= 0.0) || u > static_cast<double>(k) / n)
    throw std::domain_error("bernstein_beta_bound: requires 0 <= u <= k/n");
  const double excess = k - n * u;
  if (excess <= 0.0) return 1.0;
  const double denom = n * u * (1.0 - u) + excess / 3.0;
  return std::exp(-0.5 * excess * excess / denom);
}

}  // namespace sparsescan
