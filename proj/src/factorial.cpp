#include "simcamp/factorial.hpp"

#include <cmath>

#include "simcamp/errors.hpp"
#include "simcamp/stats.hpp"

namespace simcamp {

namespace {

std::string cell_name(const std::vector<int>& signs, const std::vector<std::string>& names) {
  std::string out = "(";
  for (std::size_t i = 0; i < signs.size(); ++i) {
    if (i > 0) out += ", ";
    out += names[i] + (signs[i] > 0 ? "=+1" : "=-1");
  }
  return out + ")";
}

}  // namespace

std::string effect_label(unsigned mask, int k) {
  std::string label;
  for (int i = 0; i < k; ++i)
    if (mask & (1u << i)) label += static_cast<char>('A' + i);
  return label;
}

FactorialResult factorial_2kr(const std::vector<std::string>& factor_names,
                              const std::map<std::vector<int>, std::vector<double>>& cells,
                              double confidence_level) {
  const int k = static_cast<int>(factor_names.size());
  if (k < 1) throw AnalysisError("factorial analysis needs at least one factor");
  if (k > 20) throw AnalysisError("factorial analysis limited to 20 factors");
  if (!(confidence_level > 0 && confidence_level < 1))
    throw AnalysisError("confidence level must be in (0, 1)");
  const unsigned n_cells = 1u << k;

  // Cell means in standard order: bit i of the index set <=> factor i at +1.
  std::vector<double> cell_mean(n_cells, 0.0);
  int r = -1;
  std::vector<int> signs(k);
  double sse = 0;
  for (unsigned c = 0; c < n_cells; ++c) {
    for (int i = 0; i < k; ++i) signs[i] = (c & (1u << i)) ? 1 : -1;
    auto it = cells.find(signs);
    if (it == cells.end())
      throw AnalysisError("incomplete design: missing cell " + cell_name(signs, factor_names));
    const std::vector<double>& ys = it->second;
    if (ys.empty())
      throw AnalysisError("incomplete design: empty cell " + cell_name(signs, factor_names));
    if (r < 0)
      r = static_cast<int>(ys.size());
    else if (static_cast<int>(ys.size()) != r)
      throw AnalysisError("ragged design: cell " + cell_name(signs, factor_names) + " has " +
                          std::to_string(ys.size()) + " replications, expected " +
                          std::to_string(r));
    double sum = 0;
    for (double y : ys) sum += y;
    cell_mean[c] = sum / static_cast<double>(r);
    for (double y : ys) sse += (y - cell_mean[c]) * (y - cell_mean[c]);
  }
  for (const auto& [key, _] : cells) {
    if (static_cast<int>(key.size()) != k)
      throw AnalysisError("cell key has " + std::to_string(key.size()) + " entries, expected " +
                          std::to_string(k));
    for (int s : key)
      if (s != 1 && s != -1) throw AnalysisError("cell levels must be -1 or +1");
  }

  FactorialResult res;
  res.k = k;
  res.r = r;
  res.factor_names = factor_names;
  res.confidence_level = confidence_level;

  const double cells_d = static_cast<double>(n_cells);
  const double runs_d = cells_d * r;

  double sst = sse;
  for (unsigned mask = 0; mask < n_cells; ++mask) {
    double q = 0;
    for (unsigned c = 0; c < n_cells; ++c) {
      // Product of this cell's signs over the factors in the subset.
      int sign = (__builtin_popcount(~c & mask) % 2 == 0) ? 1 : -1;
      q += sign * cell_mean[c];
    }
    q /= cells_d;
    if (mask == 0) {
      res.grand_mean = q;
      continue;
    }
    FactorialEffect eff;
    eff.label = effect_label(mask, k);
    for (int i = 0; i < k; ++i)
      if (mask & (1u << i)) eff.factors.push_back(factor_names[i]);
    eff.q = q;
    eff.sum_squares = runs_d * q * q;
    sst += eff.sum_squares;
    res.effects.push_back(std::move(eff));
  }

  res.sse = sse;
  res.sst = sst;
  double scale = res.grand_mean * res.grand_mean + 1.0;
  res.degenerate = sst <= 1e-20 * scale;
  if (!res.degenerate) {
    for (FactorialEffect& eff : res.effects) eff.variation_pct = 100.0 * eff.sum_squares / sst;
    res.error_variation_pct = 100.0 * sse / sst;
  }

  if (r >= 2) {
    int error_dof = static_cast<int>(n_cells) * (r - 1);
    double se2 = sse / static_cast<double>(error_dof);
    double effect_sd = std::sqrt(se2 / runs_d);
    res.effect_stddev = effect_sd;
    res.effect_ci_half_width =
        t_quantile(0.5 * (1.0 + confidence_level), error_dof) * effect_sd;
  }
  return res;
}

}  // namespace simcamp
