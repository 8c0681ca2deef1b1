#include "simcamp/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace simcamp {

void Accumulator::add(double x) {
  ++n_;
  double delta = x - mean_;
  mean_ += delta / static_cast<double>(n_);
  m2_ += delta * (x - mean_);
}

void Accumulator::merge(const Accumulator& other) {
  if (other.n_ == 0) return;
  if (n_ == 0) {
    *this = other;
    return;
  }
  double na = static_cast<double>(n_);
  double nb = static_cast<double>(other.n_);
  double delta = other.mean_ - mean_;
  double n_total = na + nb;
  mean_ += delta * nb / n_total;
  m2_ += other.m2_ + delta * delta * na * nb / n_total;
  n_ += other.n_;
}

double Accumulator::sample_variance() const {
  if (n_ < 2) return 0;
  return m2_ / static_cast<double>(n_ - 1);
}

double Accumulator::sample_stddev() const { return std::sqrt(sample_variance()); }

namespace {

// Continued fraction for the incomplete beta function (Lentz's method).
double betacf(double a, double b, double x) {
  constexpr int kMaxIter = 300;
  constexpr double kEps = 3e-16;
  constexpr double kFpMin = 1e-300;

  double qab = a + b;
  double qap = a + 1.0;
  double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kFpMin) d = kFpMin;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) break;
  }
  return h;
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
  if (x <= 0) return 0;
  if (x >= 1) return 1;
  double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) +
                    b * std::log1p(-x);
  double front = std::exp(ln_front);
  // The continued fraction converges fast only for x < (a+1)/(a+b+2);
  // use the symmetry I_x(a,b) = 1 - I_{1-x}(b,a) otherwise.
  if (x < (a + 1.0) / (a + b + 2.0)) return front * betacf(a, b, x) / a;
  return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

namespace {

double t_cdf(double t, int dof) {
  double v = static_cast<double>(dof);
  double ib = incomplete_beta(v / 2.0, 0.5, v / (v + t * t));
  return t >= 0 ? 1.0 - 0.5 * ib : 0.5 * ib;
}

}  // namespace

double t_quantile(double p, int dof) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("probability must be in (0, 1)");
  if (dof < 1) throw std::invalid_argument("degrees of freedom must be >= 1");
  if (p == 0.5) return 0;
  if (p < 0.5) return -t_quantile(1.0 - p, dof);

  double lo = 0;
  double hi = 1;
  while (t_cdf(hi, dof) < p) {
    lo = hi;
    hi *= 2;
    if (hi > 1e12) break;  // p indistinguishable from 1 in double precision
  }
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (t_cdf(mid, dof) < p)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<std::pair<double, double>> ecdf(std::vector<double> samples) {
  if (samples.empty()) throw std::invalid_argument("ecdf of empty sample");
  for (double x : samples)
    if (!std::isfinite(x)) throw std::invalid_argument("ecdf requires finite samples");
  std::sort(samples.begin(), samples.end());
  std::vector<std::pair<double, double>> out;
  double n = static_cast<double>(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    // Collapse duplicates: keep the last index of each distinct value.
    if (i + 1 < samples.size() && samples[i + 1] == samples[i]) continue;
    out.emplace_back(samples[i], static_cast<double>(i + 1) / n);
  }
  out.back().second = 1.0;
  return out;
}

double quantile_sorted(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) throw std::invalid_argument("quantile of empty sample");
  double pos = p * static_cast<double>(sorted.size() - 1);
  auto lo = static_cast<std::size_t>(pos);
  if (lo + 1 >= sorted.size()) return sorted.back();
  double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

FiveNumber five_number(std::vector<double> samples) {
  if (samples.empty()) throw std::invalid_argument("five_number of empty sample");
  for (double x : samples)
    if (!std::isfinite(x)) throw std::invalid_argument("five_number requires finite samples");
  std::sort(samples.begin(), samples.end());
  return {samples.front(), quantile_sorted(samples, 0.25), quantile_sorted(samples, 0.5),
          quantile_sorted(samples, 0.75), samples.back()};
}

}  // namespace simcamp
