#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "simcamp/factorial.hpp"
#include "simcamp/stats.hpp"
#include "simcamp/tag.hpp"
#include "simcamp/value.hpp"

namespace simcamp {

/// Mean and confidence interval of one group of a group-by analysis.
struct GroupStats {
  std::vector<std::pair<std::string, Value>> group;  // in group-by order
  std::string group_key;                             // canonical, sorted by name
  std::uint64_t n = 0;
  double mean = 0;
  double stddev = 0;  // sample stddev, n-1 denominator
  /// Student-t half-width at the requested level; absent for n = 1
  /// (zero degrees of freedom — undefined, not zero).
  std::optional<double> ci_half_width;
};

/// Streaming group-by mean/CI over tagged scalars: constant memory per
/// group. Records whose metric name differs are ignored; NaN/inf values
/// are skipped and counted. Feed every record, then call finish().
class GroupMeanAccumulator {
 public:
  /// `by` may be empty: everything aggregates into one anonymous group.
  GroupMeanAccumulator(std::string metric, std::vector<std::string> by,
                       double confidence_level = 0.95);

  void add(const TaggedScalar& record);

  /// Groups sorted by canonical group key. Throws AnalysisError when no
  /// record matched the metric.
  std::vector<GroupStats> finish() const;

  std::size_t matched() const { return matched_; }
  std::size_t skipped_non_finite() const { return skipped_; }

 private:
  std::string metric_;
  std::vector<std::string> by_;
  double level_;
  std::size_t matched_ = 0;
  std::size_t skipped_ = 0;
  struct Group {
    std::vector<std::pair<std::string, Value>> coords;
    Accumulator acc;
  };
  std::map<std::string, Group> groups_;
};

/// Collects per-group samples of one metric (this path materializes the
/// selected samples; it is the analyzer's only non-constant-memory
/// operation, used for order statistics).
class GroupSampleCollector {
 public:
  GroupSampleCollector(std::string metric, std::vector<std::string> by);

  void add(const TaggedScalar& record);

  struct Group {
    std::vector<std::pair<std::string, Value>> coords;
    std::string group_key;
    std::vector<double> samples;
  };
  /// Groups sorted by canonical key. Throws AnalysisError when empty.
  std::vector<Group> finish() const;

  std::size_t skipped_non_finite() const { return skipped_; }

 private:
  std::string metric_;
  std::vector<std::string> by_;
  std::size_t skipped_ = 0;
  std::map<std::string, Group> groups_;
};

// CSV tables, one schema per analysis kind. Floats use `digits`
// significant digits (default 6). Deterministic output.

std::string table_mean(const std::vector<GroupStats>& groups,
                       const std::vector<std::string>& by, int digits = 6);

std::string table_ecdf(const std::vector<std::pair<double, double>>& points, int digits = 6);

struct GroupFiveNumber {
  std::vector<std::pair<std::string, Value>> coords;
  std::uint64_t n = 0;
  FiveNumber summary;
};

std::string table_box(const std::vector<GroupFiveNumber>& groups,
                      const std::vector<std::string>& by, int digits = 6);

std::string table_factorial(const FactorialResult& result, int digits = 6);

/// `%.*g` rendering used by the tables.
std::string format_sig(double v, int digits);

}  // namespace simcamp
