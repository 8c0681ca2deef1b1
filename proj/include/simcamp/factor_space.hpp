#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "simcamp/value.hpp"

namespace simcamp {

/// One varied parameter: a short name used for run identity, the full
/// key pattern as written in the factors file (e.g. `**.factA`), and an
/// ordered list of levels.
struct FactorDef {
  std::string name;
  std::string pattern;
  std::vector<Value> levels;

  FactorDef(std::string name_, std::vector<Value> levels_);
  FactorDef(std::string name_, std::string pattern_, std::vector<Value> levels_);
};

/// Ordered assignment of one value per factor plus a repetition index.
/// Assignment order follows factor declaration order.
struct RunPoint {
  std::vector<std::pair<std::string, Value>> assignment;
  int rep = 0;

  const Value* value_of(std::string_view factor) const;

  /// Canonical run identity: `name1=v1,name2=v2#r=<rep>` with factor
  /// entries sorted lexicographically by name. Stable under factor
  /// reordering, added levels and added repetitions.
  std::string run_key() const;
};

/// The campaign's coordinate system: ordered factors plus a repetition
/// count. Immutable after construction; construction validates all
/// invariants (unique identifier names, nonempty level lists, no
/// duplicate levels, repetitions >= 1).
class FactorSpace {
 public:
  FactorSpace() : repetitions_(1) {}
  FactorSpace(std::vector<FactorDef> factors, int repetitions);

  const std::vector<FactorDef>& factors() const { return factors_; }
  int repetitions() const { return repetitions_; }
  const FactorDef* find(std::string_view name) const;

  /// Total number of runs: (product of level counts) x repetitions.
  std::uint64_t count() const;

  /// Enumerates every run of the campaign. The repetition index varies
  /// fastest, then the first-declared factor, with the last-declared
  /// factor varying slowest. This order defines the legacy sequential
  /// run IDs.
  std::vector<RunPoint> expand() const;

  /// Builds the run at a given position of the expand() order without
  /// materializing the whole list.
  RunPoint point_at(std::uint64_t index) const;

  /// Position of a point in the expand() order. This is the historical
  /// numeric run ID; it renumbers whenever levels or repetitions are
  /// added, which is exactly why run keys exist.
  std::uint64_t legacy_id(const RunPoint& point) const;

 private:
  std::vector<FactorDef> factors_;
  int repetitions_;
};

/// A run key split back into its parts. Values are kept as canonical
/// text; factor entries appear in the key's (sorted) order.
struct RunKeyParts {
  std::vector<std::pair<std::string, std::string>> factors;
  int rep = 0;
};

/// Decomposes a canonical run key. Throws std::invalid_argument on
/// malformed input.
RunKeyParts parse_run_key(std::string_view key);

/// Re-keys an existing run for a campaign that gained a brand-new
/// factor, inserting `name=<baseline>` at its sorted position. Used to
/// keep old runs addressable after the factor space grows.
std::string append_baseline_factor(std::string_view key, std::string_view name,
                                   const Value& baseline);

bool is_identifier(std::string_view s);

}  // namespace simcamp
