#include "simcamp/config_ini.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>
#include <optional>

#include "simcamp/errors.hpp"

namespace simcamp {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Yields (line_number, trimmed_content) for every non-blank,
// non-comment line. Accepts LF and CRLF.
template <typename Fn>
void for_each_content_line(std::string_view text, Fn&& fn) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    std::string_view line =
        nl == std::string_view::npos ? text.substr(pos) : text.substr(pos, nl - pos);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    std::string_view content = trim(line);
    if (!content.empty() && content.front() != '#') fn(line_no, content);
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
}

struct KeyValue {
  std::string_view key;
  std::string_view value;
};

KeyValue split_assignment(std::string_view content, std::size_t line_no) {
  auto eq = content.find('=');
  if (eq == std::string_view::npos)
    throw DefinitionError("expected 'key = value'", line_no);
  KeyValue kv{trim(content.substr(0, eq)), trim(content.substr(eq + 1))};
  if (kv.key.empty()) throw DefinitionError("empty key", line_no);
  if (kv.value.empty()) throw DefinitionError("empty value for key '" + std::string(kv.key) + "'",
                                              line_no);
  return kv;
}

}  // namespace

ParamSet::ParamSet(std::vector<ParamEntry> entries) : entries_(std::move(entries)) {}

const Value* ParamSet::find(std::string_view key) const {
  for (const ParamEntry& e : entries_)
    if (e.key == key) return &e.value;
  return nullptr;
}

std::optional<Value> ParamSet::take(std::string_view key) {
  auto it = std::find_if(entries_.begin(), entries_.end(),
                         [&](const ParamEntry& e) { return e.key == key; });
  if (it == entries_.end()) return std::nullopt;
  Value v = it->value;
  entries_.erase(it);
  return v;
}

ParamSet parse_params(std::string_view text) {
  std::vector<ParamEntry> entries;
  std::map<std::string, std::size_t, std::less<>> seen;
  for_each_content_line(text, [&](std::size_t line_no, std::string_view content) {
    KeyValue kv = split_assignment(content, line_no);
    std::string key(kv.key);
    auto [it, inserted] = seen.emplace(key, line_no);
    if (!inserted)
      throw DefinitionError("duplicate key '" + key + "' (first defined on line " +
                                std::to_string(it->second) + ")",
                            line_no);
    entries.push_back({std::move(key), Value::infer(kv.value), line_no});
  });
  return ParamSet(std::move(entries));
}

FactorSpace parse_factors(std::string_view text) {
  std::vector<FactorDef> factors;
  std::map<std::string, std::size_t, std::less<>> seen_names;
  std::optional<int> repeat;

  for_each_content_line(text, [&](std::size_t line_no, std::string_view content) {
    KeyValue kv = split_assignment(content, line_no);

    if (kv.key == "repeat") {
      if (repeat) throw DefinitionError("duplicate 'repeat' line", line_no);
      int r = 0;
      auto res = std::from_chars(kv.value.data(), kv.value.data() + kv.value.size(), r);
      if (res.ec != std::errc() || res.ptr != kv.value.data() + kv.value.size() || r < 1)
        throw DefinitionError("repeat must be a positive integer, got '" +
                                  std::string(kv.value) + "'",
                              line_no);
      repeat = r;
      return;
    }

    if (kv.value.size() < 3 || kv.value.substr(0, 2) != "${" || kv.value.back() != '}')
      throw DefinitionError("expected '${ v1 , v2 , ... }' factor value", line_no);
    std::string_view inner = kv.value.substr(2, kv.value.size() - 3);

    std::vector<Value> levels;
    std::string_view rest = trim(inner);
    if (rest.empty()) throw DefinitionError("empty factor value list", line_no);
    while (true) {
      auto comma = rest.find(',');
      std::string_view item = trim(comma == std::string_view::npos ? rest : rest.substr(0, comma));
      if (item.empty()) throw DefinitionError("empty value in factor list", line_no);
      levels.push_back(Value::infer(item));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }

    std::string pattern(kv.key);
    auto dot = pattern.rfind('.');
    std::string name = dot == std::string::npos ? pattern : pattern.substr(dot + 1);
    if (!is_identifier(name))
      throw DefinitionError("factor name '" + name + "' (from key '" + pattern +
                                "') is not an identifier",
                            line_no);
    auto [it, inserted] = seen_names.emplace(name, line_no);
    if (!inserted)
      throw DefinitionError("duplicate factor '" + name + "' (first defined on line " +
                                std::to_string(it->second) + ")",
                            line_no);
    try {
      factors.emplace_back(std::move(name), std::move(pattern), std::move(levels));
    } catch (const std::invalid_argument& e) {
      throw DefinitionError(e.what(), line_no);
    }
  });

  return FactorSpace(std::move(factors), repeat.value_or(1));
}

std::string render_factors(const FactorSpace& space) {
  std::string out;
  for (const FactorDef& f : space.factors()) {
    out += f.pattern;
    out += " = ${ ";
    for (std::size_t i = 0; i < f.levels.size(); ++i) {
      if (i > 0) out += ", ";
      out += f.levels[i].canonical();
    }
    out += " }\n";
  }
  out += "repeat = " + std::to_string(space.repetitions()) + "\n";
  return out;
}

CampaignDef CampaignDef::assemble(ParamSet params, FactorSpace space) {
  CampaignDef def;
  if (auto seed = params.take("seed")) {
    if (!seed->is_int() || seed->as_int() < 0)
      throw DefinitionError("'seed' must be a non-negative integer", 0);
    def.base_seed = static_cast<std::uint64_t>(seed->as_int());
  }
  for (const ParamEntry& e : params.entries())
    if (space.find(e.key) ||
        std::any_of(space.factors().begin(), space.factors().end(),
                    [&](const FactorDef& f) { return f.pattern == e.key; }))
      throw DefinitionError("parameter '" + e.key + "' collides with a factor", e.line);
  def.params = std::move(params);
  def.space = std::move(space);
  return def;
}

std::string materialize(const CampaignDef& def, const RunPoint& point) {
  std::string out;
  for (const ParamEntry& e : def.params.entries()) {
    out += e.key;
    out += " = ";
    out += e.value.canonical();
    out += '\n';
  }
  for (const FactorDef& f : def.space.factors()) {
    const Value* v = point.value_of(f.name);
    if (!v)
      throw std::invalid_argument("point does not assign factor '" + f.name + "'");
    out += f.pattern;
    out += " = ";
    out += v->canonical();
    out += '\n';
  }
  out += "# runkey = ";
  out += point.run_key();
  out += '\n';
  return out;
}

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string params_digest(const ParamSet& params) {
  std::string canon;
  for (const ParamEntry& e : params.entries()) {
    canon += e.key;
    canon += '=';
    canon += e.value.canonical();
    canon += '\n';
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a64(canon)));
  return std::string("fnv1a64:") + buf;
}

}  // namespace simcamp
