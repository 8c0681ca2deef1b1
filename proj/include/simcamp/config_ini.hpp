#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "simcamp/factor_space.hpp"
#include "simcamp/value.hpp"

namespace simcamp {

struct ParamEntry {
  std::string key;
  Value value;
  std::size_t line = 0;  // source line, 0 when not file-backed
};

/// The fixed parameters of a campaign, in file order.
class ParamSet {
 public:
  ParamSet() = default;
  explicit ParamSet(std::vector<ParamEntry> entries);

  const std::vector<ParamEntry>& entries() const { return entries_; }
  const Value* find(std::string_view key) const;
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }

  /// Removes an entry (used to lift `seed` out of the parameter list).
  /// Returns the removed value, if present.
  std::optional<Value> take(std::string_view key);

 private:
  std::vector<ParamEntry> entries_;
};

/// A fully parsed campaign definition: fixed parameters, the factor
/// space, and the base RNG seed (`seed = <int>` in the params file,
/// default 0).
struct CampaignDef {
  ParamSet params;
  FactorSpace space;
  std::uint64_t base_seed = 0;

  /// Lifts `seed` out of the params and checks that no parameter key
  /// collides with a factor pattern. Throws DefinitionError.
  static CampaignDef assemble(ParamSet params, FactorSpace space);
};

/// Parses the fixed-parameters file: `key = value` lines, `#` comments,
/// blank lines. Values are type-inferred (int, float, bool, string).
/// Throws DefinitionError with line numbers on duplicate keys or lines
/// without `=`.
ParamSet parse_params(std::string_view text);

/// Parses the factors file: `key = ${ v1 , v2 , ... }` lines plus one
/// optional `repeat = R` line. The factor's short name is the last
/// dot-component of the key. Throws DefinitionError on empty value
/// lists, duplicate factors or values, and non-positive repeat counts.
FactorSpace parse_factors(std::string_view text);

/// Canonical re-rendering of a factor space in factors-file syntax.
/// parse_factors(render_factors(s)) reproduces s exactly.
std::string render_factors(const FactorSpace& space);

/// Renders the single concrete configuration for one run: all fixed
/// parameters, one plain assignment per factor, then a trailing
/// `# runkey = <key>` comment. Deterministic bytes, LF line endings.
std::string materialize(const CampaignDef& def, const RunPoint& point);

/// FNV-1a 64 digest of the canonical parameter rendering, as
/// `fnv1a64:<hex>`. Stored in the manifest to detect definition drift.
std::string params_digest(const ParamSet& params);

std::uint64_t fnv1a64(std::string_view data);

}  // namespace simcamp
