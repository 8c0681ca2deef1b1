#include "simcamp/analyzer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "simcamp/errors.hpp"
#include "simcamp/export.hpp"

namespace simcamp {

namespace {

// Canonical group identity: name=value pairs sorted by name, the same
// shape as a run key without the repetition suffix.
std::string group_key_of(const std::vector<std::pair<std::string, Value>>& coords) {
  std::vector<std::pair<std::string, std::string>> parts;
  parts.reserve(coords.size());
  for (const auto& [name, value] : coords) parts.emplace_back(name, value.canonical());
  std::sort(parts.begin(), parts.end());
  std::string key;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) key += ',';
    key += parts[i].first + "=" + parts[i].second;
  }
  return key;
}

std::vector<std::pair<std::string, Value>> group_coords(
    const TaggedScalar& record, const std::vector<std::string>& by) {
  std::vector<std::pair<std::string, Value>> coords;
  coords.reserve(by.size());
  for (const std::string& name : by) {
    const Value* v = nullptr;
    for (const auto& [n, value] : record.run->assignment)
      if (n == name) {
        v = &value;
        break;
      }
    if (!v) throw UnknownFactorError(name);
    coords.emplace_back(name, *v);
  }
  return coords;
}

}  // namespace

GroupMeanAccumulator::GroupMeanAccumulator(std::string metric, std::vector<std::string> by,
                                           double confidence_level)
    : metric_(std::move(metric)), by_(std::move(by)), level_(confidence_level) {
  if (!(level_ > 0 && level_ < 1))
    throw AnalysisError("confidence level must be in (0, 1)");
}

void GroupMeanAccumulator::add(const TaggedScalar& record) {
  if (record.name != metric_) return;
  if (!record.finite || !std::isfinite(record.value)) {
    ++skipped_;
    return;
  }
  ++matched_;
  auto coords = group_coords(record, by_);
  Group& g = groups_[group_key_of(coords)];
  if (g.coords.empty() && !coords.empty()) g.coords = std::move(coords);
  g.acc.add(record.value);
}

std::vector<GroupStats> GroupMeanAccumulator::finish() const {
  if (matched_ == 0)
    throw AnalysisError("no records match metric '" + metric_ + "'" +
                        (skipped_ ? " (" + std::to_string(skipped_) + " non-finite skipped)"
                                  : std::string()));
  std::vector<GroupStats> out;
  out.reserve(groups_.size());
  for (const auto& [key, g] : groups_) {
    GroupStats s;
    s.group = g.coords;
    s.group_key = key;
    s.n = g.acc.n();
    s.mean = g.acc.mean();
    s.stddev = g.acc.sample_stddev();
    if (s.n >= 2)
      s.ci_half_width = t_quantile(0.5 * (1.0 + level_), static_cast<int>(s.n - 1)) * s.stddev /
                        std::sqrt(static_cast<double>(s.n));
    out.push_back(std::move(s));
  }
  return out;
}

GroupSampleCollector::GroupSampleCollector(std::string metric, std::vector<std::string> by)
    : metric_(std::move(metric)), by_(std::move(by)) {}

void GroupSampleCollector::add(const TaggedScalar& record) {
  if (record.name != metric_) return;
  if (!record.finite || !std::isfinite(record.value)) {
    ++skipped_;
    return;
  }
  auto coords = group_coords(record, by_);
  std::string key = group_key_of(coords);
  Group& g = groups_[key];
  if (g.samples.empty()) {
    g.coords = std::move(coords);
    g.group_key = key;
  }
  g.samples.push_back(record.value);
}

std::vector<GroupSampleCollector::Group> GroupSampleCollector::finish() const {
  if (groups_.empty()) throw AnalysisError("no records match metric '" + metric_ + "'");
  std::vector<Group> out;
  out.reserve(groups_.size());
  for (const auto& [_, g] : groups_) out.push_back(g);
  return out;
}

std::string format_sig(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
  return buf;
}

std::string table_mean(const std::vector<GroupStats>& groups, const std::vector<std::string>& by,
                       int digits) {
  std::string out;
  for (const std::string& name : by) out += csv_escape(name) + ",";
  out += "n,mean,stddev,ci_half_width\n";
  for (const GroupStats& g : groups) {
    for (const auto& [_, value] : g.group) out += csv_escape(value.canonical()) + ",";
    out += std::to_string(g.n) + "," + format_sig(g.mean, digits) + "," +
           format_sig(g.stddev, digits) + ",";
    if (g.ci_half_width) out += format_sig(*g.ci_half_width, digits);
    out += "\n";
  }
  return out;
}

std::string table_ecdf(const std::vector<std::pair<double, double>>& points, int digits) {
  std::string out = "x,F\n";
  for (const auto& [x, f] : points)
    out += format_sig(x, digits) + "," + format_sig(f, digits) + "\n";
  return out;
}

std::string table_box(const std::vector<GroupFiveNumber>& groups,
                      const std::vector<std::string>& by, int digits) {
  std::string out;
  for (const std::string& name : by) out += csv_escape(name) + ",";
  out += "n,min,q1,median,q3,max\n";
  for (const GroupFiveNumber& g : groups) {
    for (const auto& [_, value] : g.coords) out += csv_escape(value.canonical()) + ",";
    out += std::to_string(g.n) + "," + format_sig(g.summary.min, digits) + "," +
           format_sig(g.summary.q1, digits) + "," + format_sig(g.summary.median, digits) + "," +
           format_sig(g.summary.q3, digits) + "," + format_sig(g.summary.max, digits) + "\n";
  }
  return out;
}

std::string table_factorial(const FactorialResult& result, int digits) {
  std::string out = "effect,factors,q,sum_squares,variation_pct,ci_half_width\n";
  for (const FactorialEffect& eff : result.effects) {
    std::string joined;
    for (std::size_t i = 0; i < eff.factors.size(); ++i) {
      if (i > 0) joined += ":";
      joined += eff.factors[i];
    }
    out += eff.label + "," + csv_escape(joined) + "," + format_sig(eff.q, digits) + "," +
           format_sig(eff.sum_squares, digits) + "," + format_sig(eff.variation_pct, digits) + ",";
    if (result.effect_ci_half_width) out += format_sig(*result.effect_ci_half_width, digits);
    out += "\n";
  }
  out += "error,," + std::string() + "," + format_sig(result.sse, digits) + "," +
         format_sig(result.error_variation_pct, digits) + ",\n";
  return out;
}

}  // namespace simcamp
