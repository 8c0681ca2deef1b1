#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace simcamp {

/// Online mean/variance accumulator (Welford). Numerically stable and
/// mergeable, so per-group accumulation can be parallelized and joined.
class Accumulator {
 public:
  void add(double x);
  void merge(const Accumulator& other);

  std::uint64_t n() const { return n_; }
  double mean() const { return mean_; }
  double m2() const { return m2_; }

  /// Sample variance with n-1 denominator; 0 when fewer than 2 samples.
  double sample_variance() const;
  double sample_stddev() const;

 private:
  std::uint64_t n_ = 0;
  double mean_ = 0;
  double m2_ = 0;
};

/// Quantile of Student's t distribution: the value t such that
/// CDF(t; dof) = p, accurate to well under 1e-6. Computed by bisection
/// on the CDF, which is evaluated through the regularized incomplete
/// beta function.
double t_quantile(double p, int dof);

/// Regularized incomplete beta function I_x(a, b).
double incomplete_beta(double a, double b, double x);

/// Empirical CDF: strictly increasing x (duplicates collapsed) with
/// F(x) = (count <= x) / n; the final F is exactly 1. Throws
/// std::invalid_argument on empty or non-finite input.
std::vector<std::pair<double, double>> ecdf(std::vector<double> samples);

struct FiveNumber {
  double min = 0, q1 = 0, median = 0, q3 = 0, max = 0;
};

/// Five-number summary with quartiles by linear interpolation of order
/// statistics at positions (n-1)p — the common "type 7" rule.
FiveNumber five_number(std::vector<double> samples);

/// Type-7 quantile of an already sorted, nonempty sample.
double quantile_sorted(const std::vector<double>& sorted, double p);

}  // namespace simcamp
