#include "simcamp/factor_space.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <stdexcept>
#include <unordered_set>

namespace simcamp {

namespace {

std::string derive_name(const std::string& pattern) {
  auto dot = pattern.rfind('.');
  return dot == std::string::npos ? pattern : pattern.substr(dot + 1);
}

void validate_level(const std::string& factor, const Value& v) {
  if (!v.is_string()) return;
  const std::string& s = v.as_string();
  if (s.empty())
    throw std::invalid_argument("factor '" + factor + "': empty string level");
  for (char c : s) {
    if (c == ',' || c == '=' || c == '#' || c == '{' || c == '}' ||
        std::isspace(static_cast<unsigned char>(c)))
      throw std::invalid_argument("factor '" + factor + "': level '" + s +
                                  "' contains a character reserved by run keys");
  }
}

}  // namespace

bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_') return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

FactorDef::FactorDef(std::string name_, std::vector<Value> levels_)
    : FactorDef(name_, name_, std::move(levels_)) {}

FactorDef::FactorDef(std::string name_, std::string pattern_, std::vector<Value> levels_)
    : name(std::move(name_)), pattern(std::move(pattern_)), levels(std::move(levels_)) {
  if (!is_identifier(name))
    throw std::invalid_argument("factor name '" + name + "' is not an identifier");
  if (derive_name(pattern) != name)
    throw std::invalid_argument("factor pattern '" + pattern + "' does not end in '" + name + "'");
  if (levels.empty()) throw std::invalid_argument("factor '" + name + "' has no levels");
  std::unordered_set<std::string> seen;
  for (const Value& v : levels) {
    validate_level(name, v);
    if (!seen.insert(v.canonical()).second)
      throw std::invalid_argument("factor '" + name + "': duplicate level '" + v.canonical() +
                                  "'");
  }
}

const Value* RunPoint::value_of(std::string_view factor) const {
  for (const auto& [name, value] : assignment)
    if (name == factor) return &value;
  return nullptr;
}

std::string RunPoint::run_key() const {
  std::vector<std::pair<std::string, std::string>> parts;
  parts.reserve(assignment.size());
  for (const auto& [name, value] : assignment) parts.emplace_back(name, value.canonical());
  std::sort(parts.begin(), parts.end());
  std::string key;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) key += ',';
    key += parts[i].first;
    key += '=';
    key += parts[i].second;
  }
  key += "#r=";
  key += std::to_string(rep);
  return key;
}

FactorSpace::FactorSpace(std::vector<FactorDef> factors, int repetitions)
    : factors_(std::move(factors)), repetitions_(repetitions) {
  if (repetitions_ < 1) throw std::invalid_argument("repetitions must be >= 1");
  std::unordered_set<std::string> names;
  for (const FactorDef& f : factors_)
    if (!names.insert(f.name).second)
      throw std::invalid_argument("duplicate factor name '" + f.name + "'");
}

const FactorDef* FactorSpace::find(std::string_view name) const {
  for (const FactorDef& f : factors_)
    if (f.name == name) return &f;
  return nullptr;
}

std::uint64_t FactorSpace::count() const {
  unsigned __int128 n = repetitions_;
  for (const FactorDef& f : factors_) {
    n *= f.levels.size();
    if (n > static_cast<unsigned __int128>(UINT64_MAX))
      throw std::overflow_error("factor space too large");
  }
  return static_cast<std::uint64_t>(n);
}

RunPoint FactorSpace::point_at(std::uint64_t index) const {
  RunPoint p;
  p.rep = static_cast<int>(index % repetitions_);
  std::uint64_t q = index / repetitions_;
  p.assignment.reserve(factors_.size());
  for (const FactorDef& f : factors_) {
    std::uint64_t idx = q % f.levels.size();
    q /= f.levels.size();
    p.assignment.emplace_back(f.name, f.levels[idx]);
  }
  return p;
}

std::vector<RunPoint> FactorSpace::expand() const {
  std::uint64_t n = count();
  std::vector<RunPoint> points;
  points.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) points.push_back(point_at(i));
  return points;
}

std::uint64_t FactorSpace::legacy_id(const RunPoint& point) const {
  if (point.rep < 0 || point.rep >= repetitions_)
    throw std::invalid_argument("point not in space: repetition " + std::to_string(point.rep) +
                                " out of range");
  if (point.assignment.size() != factors_.size())
    throw std::invalid_argument("point not in space: assignment covers " +
                                std::to_string(point.assignment.size()) + " of " +
                                std::to_string(factors_.size()) + " factors");
  // Mixed-radix index: rep is the least significant digit, then factors
  // in declaration order.
  std::uint64_t id = 0;
  std::uint64_t stride = repetitions_;
  id += static_cast<std::uint64_t>(point.rep);
  for (const FactorDef& f : factors_) {
    const Value* v = point.value_of(f.name);
    if (!v) throw std::invalid_argument("point not in space: missing factor '" + f.name + "'");
    auto it = std::find_if(f.levels.begin(), f.levels.end(),
                           [&](const Value& lv) { return lv.same_canonical(*v); });
    if (it == f.levels.end())
      throw std::invalid_argument("point not in space: '" + v->canonical() +
                                  "' is not a level of factor '" + f.name + "'");
    id += stride * static_cast<std::uint64_t>(it - f.levels.begin());
    stride *= f.levels.size();
  }
  return id;
}

RunKeyParts parse_run_key(std::string_view key) {
  auto hash = key.rfind("#r=");
  if (hash == std::string_view::npos)
    throw std::invalid_argument("run key missing '#r=' suffix: " + std::string(key));
  RunKeyParts parts;
  std::string_view rep_text = key.substr(hash + 3);
  auto res = std::from_chars(rep_text.data(), rep_text.data() + rep_text.size(), parts.rep);
  if (res.ec != std::errc() || res.ptr != rep_text.data() + rep_text.size() || parts.rep < 0)
    throw std::invalid_argument("run key has invalid repetition: " + std::string(key));
  std::string_view body = key.substr(0, hash);
  while (!body.empty()) {
    auto comma = body.find(',');
    std::string_view entry = body.substr(0, comma);
    auto eq = entry.find('=');
    if (eq == std::string_view::npos || eq == 0)
      throw std::invalid_argument("run key has malformed entry: " + std::string(key));
    parts.factors.emplace_back(std::string(entry.substr(0, eq)),
                               std::string(entry.substr(eq + 1)));
    if (comma == std::string_view::npos) break;
    body.remove_prefix(comma + 1);
  }
  return parts;
}

std::string append_baseline_factor(std::string_view key, std::string_view name,
                                   const Value& baseline) {
  RunKeyParts parts = parse_run_key(key);
  for (const auto& [existing, _] : parts.factors)
    if (existing == name)
      throw std::invalid_argument("factor '" + std::string(name) + "' already present in key");
  auto pos = std::lower_bound(parts.factors.begin(), parts.factors.end(), name,
                              [](const auto& entry, std::string_view n) { return entry.first < n; });
  parts.factors.emplace(pos, std::string(name), baseline.canonical());
  std::string out;
  for (std::size_t i = 0; i < parts.factors.size(); ++i) {
    if (i > 0) out += ',';
    out += parts.factors[i].first;
    out += '=';
    out += parts.factors[i].second;
  }
  out += "#r=";
  out += std::to_string(parts.rep);
  return out;
}

}  // namespace simcamp
