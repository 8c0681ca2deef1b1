#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace simcamp {

/// One estimated effect of a 2^k factorial design: a single factor
/// (label "A", "B", ...) or an interaction ("AB", "ABC", ...).
struct FactorialEffect {
  std::string label;
  std::vector<std::string> factors;  // the factor names in this subset
  double q = 0;                      // effect estimate from the sign table
  double sum_squares = 0;            // 2^k * r * q^2
  double variation_pct = 0;          // 100 * ss / SST (0 when degenerate)
};

struct FactorialResult {
  int k = 0;
  int r = 0;
  std::vector<std::string> factor_names;  // order assigns letters A, B, C...
  double grand_mean = 0;                  // q0
  std::vector<FactorialEffect> effects;   // all 2^k - 1 nonempty subsets
  double sse = 0;
  double sst = 0;
  double error_variation_pct = 0;
  double confidence_level = 0;
  /// Standard error of an effect and the matching CI half-width; only
  /// available with replication (r >= 2).
  std::optional<double> effect_stddev;
  std::optional<double> effect_ci_half_width;
  /// True when SST is (numerically) zero: constant responses, no
  /// variation to allocate.
  bool degenerate = false;
};

/// Sign-table analysis of a complete 2^k factorial design with r
/// replications per cell.
///
/// `cells` maps each level vector in {-1,+1}^k (one entry per factor,
/// in factor_names order) to that cell's r replicate responses. Every
/// cell must be present with the same replicate count. Effects are
///   q_S = (1/2^k) * sum over cells of sign_S(cell) * cell mean,
/// sums of squares ss(S) = 2^k * r * q_S^2, experimental error
/// SSE = sum of squared deviations from cell means, SST = sum ss + SSE,
/// and each effect's allocation of variation is 100 * ss / SST. The
/// effect CI uses 2^k*(r-1) error degrees of freedom.
///
/// Throws AnalysisError on an incomplete design (the message names the
/// first missing cell), ragged replication counts, or bad inputs.
FactorialResult factorial_2kr(const std::vector<std::string>& factor_names,
                              const std::map<std::vector<int>, std::vector<double>>& cells,
                              double confidence_level = 0.95);

/// Subset label for the given factor bitmask: bit i set -> i-th letter.
std::string effect_label(unsigned mask, int k);

}  // namespace simcamp
