#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sparsescan/numerics.hpp"
#include "sparsescan/rng.hpp"

namespace sparsescan {

enum class Family {
  Normal,
  GeneralizedGaussian,
  StudentT,
  Pareto,
  Cauchy,
  Uniform01,
};

// A null distribution F.  Parameter meaning by family:
//   GeneralizedGaussian: exponent a > 0, density proportional to exp(-|x|^a/a)
//                        (a = 2 recovers the standard normal)
//   StudentT:            degrees of freedom, fractional values allowed
//   Pareto:              tail exponent a > 0 and scale (support [scale, inf))
class BaseDistribution {
 public:
  static BaseDistribution normal();
  static BaseDistribution generalized_gaussian(double a);
  static BaseDistribution student_t(double df);
  static BaseDistribution pareto(double a, double scale = 1.0);
  static BaseDistribution cauchy();
  static BaseDistribution uniform01();

  Family family() const { return family_; }
  double shape() const { return shape_; }  // a or df; unused for normal/cauchy/uniform
  double scale() const { return scale_; }  // pareto only

  double cdf(double x) const;
  double survival(double x) const;  // 1 - cdf, computed directly in the tail
  double quantile(Probability p) const;  // p in (0,1); cdf(quantile(p)) ~ p to 1e-9

  // Tail exponent when the upper tail is a power law (student_t: df,
  // pareto: a, cauchy: 1); nullopt for the light-tailed families.
  std::optional<double> tail_exponent() const;

  std::string name() const;

 private:
  BaseDistribution(Family f, double shape, double scale)
      : family_(f), shape_(shape), scale_(scale) {}

  Family family_;
  double shape_;
  double scale_;
};

// Fraction n^-beta of contaminated draws; beta in (1/2, 1) keeps the
// mixture sparse.
double sparsity_fraction(int n, double beta);

// Shift placing the contamination at effect size r on the family's natural
// scale:
//   normal                 sqrt(2 r log n)
//   generalized gaussian   (a r log n)^(1/a)
//   student_t (df = k)     n^(r/(k+1))
//   pareto (exponent a)    n^(r/(a+1))
//   cauchy                 n^(r/2)
double shift_amount(const BaseDistribution& base, int n, double r);

// Sparse mixture alternative: each draw comes from the base law with
// probability 1 - epsilon and from the base law shifted right by mu with
// probability epsilon; epsilon and mu derive from (n, beta, r).
struct MixtureSpec {
  BaseDistribution base;
  int n;
  double beta;
  double r;
  double epsilon;  // sparsity_fraction(n, beta)
  double mu;       // shift_amount(base, n, r)

  MixtureSpec(BaseDistribution base, int n, double beta, double r);
};

// An observed sample, kept sorted ascending; every statistic relies on it.
class Sample {
 public:
  explicit Sample(std::vector<double> values);

  const std::vector<double>& values() const { return values_; }
  int size() const { return static_cast<int>(values_.size()); }

 private:
  std::vector<double> values_;
};

// n iid draws by inverse transform (one uniform per draw), sorted.
Sample sample(const BaseDistribution& base, int n, Rng& rng);

// n independent mixture draws (two uniforms per draw: contamination flag,
// then the value), sorted.
Sample mixture_sample(const MixtureSpec& spec, Rng& rng);

}  // namespace sparsescan
