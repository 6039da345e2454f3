#include "sparsescan/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sparsescan {

namespace {

constexpr double kPi = 3.14159265358979323846;

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }
double normal_survival(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

// Acklam's rational approximation to the normal quantile, then one Halley
// step through erfc to push the residual to machine precision.
double normal_quantile(double p) {
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  double x;
  if (p < plow) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - plow) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) *
        q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log1p(-p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double e = normal_cdf(x) - p;
  const double u = e * std::sqrt(2.0 * kPi) * std::exp(0.5 * x * x);
  return x - u / (1.0 + 0.5 * x * u);
}

// Student-t cdf through the incomplete beta; exact for fractional df.
double student_t_cdf(double df, double x) {
  if (x == 0.0) return 0.5;
  const double ib =
      reg_inc_beta(df / (df + x * x), 0.5 * df, 0.5);
  return (x > 0.0) ? 1.0 - 0.5 * ib : 0.5 * ib;
}

double student_t_quantile(double df, double p) {
  if (p == 0.5) return 0.0;
  const double pp = 2.0 * std::min(p, 1.0 - p);
  const double x = reg_inc_beta_inv(pp, 0.5 * df, 0.5);
  const double t = std::sqrt(df * (1.0 - x) / std::max(x, 1e-300));
  return (p < 0.5) ? -t : t;
}

// Generalized gaussian with density ~ exp(-|x|^a/a): |X|^a/a is
// Gamma(1/a)-distributed, so the folded cdf is a regularized lower gamma.
double gg_half_cdf(double a, double x) {
  // P(|X| <= x) for x >= 0
  return reg_lower_gamma(1.0 / a, std::pow(x, a) / a);
}

double gg_cdf(double a, double x) {
  if (x >= 0.0) return 0.5 + 0.5 * gg_half_cdf(a, x);
  return 0.5 - 0.5 * gg_half_cdf(a, -x);
}

double gg_survival(double a, double x) {
  if (x >= 0.0) return 0.5 * reg_upper_gamma(1.0 / a, std::pow(x, a) / a);
  return 1.0 - gg_cdf(a, x);
}

double gg_quantile(double a, double p) {
  if (p == 0.5) return 0.0;
  const double target = (p > 0.5) ? p : 1.0 - p;
  // Bisection on the folded cdf; there is no closed-form inverse for
  // general a.  Bracket grows geometrically first.
  double lo = 0.0, hi = 1.0;
  while (gg_cdf(a, hi) < target) hi *= 2.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (gg_cdf(a, mid) < target)
      lo = mid;
    else
      hi = mid;
  }
  const double x = 0.5 * (lo + hi);
  return (p > 0.5) ? x : -x;
}

double cauchy_cdf(double x) {
  if (x > 0.0) return 1.0 - std::atan(1.0 / x) / kPi;
  return 0.5 + std::atan(x) / kPi;
}

double cauchy_survival(double x) {
  if (x > 0.0) return std::atan(1.0 / x) / kPi;
  return 0.5 - std::atan(x) / kPi;
}

}  // namespace

BaseDistribution BaseDistribution::normal() {
  return {Family::Normal, 0.0, 0.0};
}

BaseDistribution BaseDistribution::generalized_gaussian(double a) {
  if (!(a > 0.0))
    throw std::domain_error("generalized_gaussian: exponent must be positive");
  return {Family::GeneralizedGaussian, a, 0.0};
}

BaseDistribution BaseDistribution::student_t(double df) {
  if (!(df > 0.0))
    throw std::domain_error("student_t: degrees of freedom must be positive");
  return {Family::StudentT, df, 0.0};
}

BaseDistribution BaseDistribution::pareto(double a, double scale) {
  if (!(a > 0.0))
    throw std::domain_error("pareto: tail exponent must be positive");
  if (!(scale > 0.0)) throw std::domain_error("pareto: scale must be positive");
  return {Family::Pareto, a, scale};
}

BaseDistribution BaseDistribution::cauchy() {
  return {Family::Cauchy, 0.0, 0.0};
}

BaseDistribution BaseDistribution::uniform01() {
  return {Family::Uniform01, 0.0, 0.0};
}

double BaseDistribution::cdf(double x) const {
  switch (family_) {
    case Family::Normal:
      return normal_cdf(x);
    case Family::GeneralizedGaussian:
      return gg_cdf(shape_, x);
    case Family::StudentT:
      return student_t_cdf(shape_, x);
    case Family::Pareto:
      return (x <= scale_) ? 0.0 : 1.0 - std::pow(scale_ / x, shape_);
    case Family::Cauchy:
      return cauchy_cdf(x);
    case Family::Uniform01:
      return std::clamp(x, 0.0, 1.0);
  }
  return 0.0;  // unreachable
}

double BaseDistribution::survival(double x) const {
  switch (family_) {
    case Family::Normal:
      return normal_survival(x);
    case Family::GeneralizedGaussian:
      return gg_survival(shape_, x);
    case Family::StudentT:
      // symmetric law: upper tail at x is the cdf at -x
      return student_t_cdf(shape_, -x);
    case Family::Pareto:
      return (x <= scale_) ? 1.0 : std::pow(scale_ / x, shape_);
    case Family::Cauchy:
      return cauchy_survival(x);
    case Family::Uniform01:
      return 1.0 - std::clamp(x, 0.0, 1.0);
  }
  return 0.0;  // unreachable
}

double BaseDistribution::quantile(Probability p) const {
  if (!(p > 0.0 && p < 1.0))
    throw std::domain_error("quantile: p must lie in (0,1)");
  switch (family_) {
    case Family::Normal:
      return normal_quantile(p);
    case Family::GeneralizedGaussian:
      return gg_quantile(shape_, p);
    case Family::StudentT:
      return student_t_quantile(shape_, p);
    case Family::Pareto:
      return scale_ * std::pow(1.0 - p, -1.0 / shape_);
    case Family::Cauchy:
      return std::tan(kPi * (p - 0.5));
    case Family::Uniform01:
      return p;
  }
  return 0.0;  // unreachable
}

std::optional<double> BaseDistribution::tail_exponent() const {
  switch (family_) {
    case Family::StudentT:
      return shape_;
    case Family::Pareto:
      return shape_;
    case Family::Cauchy:
      return 1.0;
    default:
      return std::nullopt;
  }
}

std::string BaseDistribution::name() const {
  switch (family_) {
    case Family::Normal:
      return "normal";
    case Family::GeneralizedGaussian:
      return "generalized_gaussian(a=" + std::to_string(shape_) + ")";
    case Family::StudentT:
      return "student_t(df=" + std::to_string(shape_) + ")";
    case Family::Pareto:
      return "pareto(a=" + std::to_string(shape_) +
             ", scale=" + std::to_string(scale_) + ")";
    case Family::Cauchy:
      return "cauchy";
    case Family::Uniform01:
      return "uniform01";
  }
  return "?";
}

double sparsity_fraction(int n, double beta) {
  if (n < 2) throw std::domain_error("sparsity_fraction: n must be >= 2");
  if (!(beta > 0.5 && beta < 1.0))
    throw std::domain_error("sparsity_fraction: beta must lie in (1/2, 1)");
  return std::pow(static_cast<double>(n), -beta);
}

double shift_amount(const BaseDistribution& base, int n, double r) {
  if (n < 2) throw std::domain_error("shift_amount: n must be >= 2");
  if (!(r >= 0.0)) throw std::domain_error("shift_amount: r must be >= 0");
  const double logn = std::log(static_cast<double>(n));
  switch (base.family()) {
    case Family::Normal:
      return std::sqrt(2.0 * r * logn);
    case Family::GeneralizedGaussian: {
      const double a = base.shape();
      return std::pow(a * r * logn, 1.0 / a);
    }
    case Family::StudentT:
      return std::pow(static_cast<double>(n), r / (base.shape() + 1.0));
    case Family::Pareto:
      return std::pow(static_cast<double>(n), r / (base.shape() + 1.0));
    case Family::Cauchy:
      return std::pow(static_cast<double>(n), r / 2.0);
    case Family::Uniform01:
      throw std::domain_error(
          "shift_amount: uniform01 has no effect-size calibration");
  }
  return 0.0;  // unreachable
}

MixtureSpec::MixtureSpec(BaseDistribution base_in, int n_in, double beta_in,
                         double r_in)
    : base(base_in),
      n(n_in),
      beta(beta_in),
      r(r_in),
      epsilon(sparsity_fraction(n_in, beta_in)),
      mu(shift_amount(base_in, n_in, r_in)) {
  if (epsilon > 0.5)
    throw std::domain_error("MixtureSpec: contamination fraction above 1/2");
}

Sample::Sample(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw std::invalid_argument("Sample: empty sample");
  std::sort(values_.begin(), values_.end());
}

Sample sample(const BaseDistribution& base, int n, Rng& rng) {
  if (n < 1) throw std::invalid_argument("sample: n must be >= 1");
  std::vector<double> v(static_cast<std::size_t>(n));
  for (double& x : v) x = base.quantile(uniform_open01(rng));
  return Sample(std::move(v));
}

Sample mixture_sample(const MixtureSpec& spec, Rng& rng) {
  std::vector<double> v(static_cast<std::size_t>(spec.n));
  for (double& x : v) {
    const bool contaminated = uniform_open01(rng) < spec.epsilon;
    x = spec.base.quantile(uniform_open01(rng));
    if (contaminated) x += spec.mu;
  }
  return Sample(std::move(v));
}

}  // namespace sparsescan
