#include "simcamp/manifest.hpp"

#include <fstream>
#include <json.hpp>

#include "simcamp/errors.hpp"

namespace simcamp {

using ordered_json = nlohmann::ordered_json;

namespace {

ordered_json value_to_json(const Value& v) {
  if (v.is_int()) return v.as_int();
  if (v.is_double()) return v.as_double();
  if (v.is_bool()) return v.as_bool();
  return v.as_string();
}

Value value_from_json(const ordered_json& j) {
  switch (j.type()) {
    case ordered_json::value_t::number_integer:
      return Value::from_int(j.get<std::int64_t>());
    case ordered_json::value_t::number_unsigned:
      return Value::from_int(static_cast<std::int64_t>(j.get<std::uint64_t>()));
    case ordered_json::value_t::number_float:
      return Value::from_double(j.get<double>());
    case ordered_json::value_t::boolean:
      return Value::from_bool(j.get<bool>());
    case ordered_json::value_t::string:
      return Value::from_string(j.get<std::string>());
    default:
      throw CampaignStateError("manifest: unsupported value type " + std::string(j.type_name()));
  }
}

ordered_json record_to_json(const RunRecord& r) {
  ordered_json j;
  j["key"] = r.key;
  ordered_json assignment = ordered_json::object();
  for (const auto& [name, value] : r.assignment) assignment[name] = value_to_json(value);
  j["assignment"] = std::move(assignment);
  j["rep"] = r.rep;
  j["status"] = std::string(to_string(r.status));
  j["seed"] = r.seed;
  j["exit_code"] = r.exit_code ? ordered_json(*r.exit_code) : ordered_json(nullptr);
  j["config_path"] = r.config_path;
  j["sca_path"] = r.sca_path;
  j["vec_path"] = r.vec_path;
  j["started_at"] = r.started_at ? ordered_json(*r.started_at) : ordered_json(nullptr);
  j["finished_at"] = r.finished_at ? ordered_json(*r.finished_at) : ordered_json(nullptr);
  j["error"] = r.error;
  return j;
}

RunRecord record_from_json(const ordered_json& j) {
  RunRecord r;
  r.key = j.at("key").get<std::string>();
  for (const auto& [name, value] : j.at("assignment").items())
    r.assignment.emplace_back(name, value_from_json(value));
  r.rep = j.at("rep").get<int>();
  r.status = run_status_from_string(j.at("status").get<std::string>());
  r.seed = j.at("seed").get<std::uint64_t>();
  if (!j.at("exit_code").is_null()) r.exit_code = j.at("exit_code").get<int>();
  r.config_path = j.at("config_path").get<std::string>();
  r.sca_path = j.at("sca_path").get<std::string>();
  r.vec_path = j.at("vec_path").get<std::string>();
  if (!j.at("started_at").is_null()) r.started_at = j.at("started_at").get<std::int64_t>();
  if (!j.at("finished_at").is_null()) r.finished_at = j.at("finished_at").get<std::int64_t>();
  r.error = j.value("error", std::string());
  return r;
}

}  // namespace

std::string_view to_string(RunStatus s) {
  switch (s) {
    case RunStatus::pending: return "pending";
    case RunStatus::running: return "running";
    case RunStatus::done: return "done";
    case RunStatus::failed: return "failed";
  }
  return "pending";
}

RunStatus run_status_from_string(std::string_view s) {
  if (s == "pending") return RunStatus::pending;
  if (s == "running") return RunStatus::running;
  if (s == "done") return RunStatus::done;
  if (s == "failed") return RunStatus::failed;
  throw CampaignStateError("manifest: unknown run status '" + std::string(s) + "'");
}

RunRecord* Manifest::find(std::string_view key) {
  for (RunRecord& r : records)
    if (r.key == key) return &r;
  return nullptr;
}

const RunRecord* Manifest::find(std::string_view key) const {
  for (const RunRecord& r : records)
    if (r.key == key) return &r;
  return nullptr;
}

CampaignDef Manifest::campaign_def() const {
  CampaignDef def;
  def.params = params;
  def.space = space;
  def.base_seed = base_seed;
  return def;
}

std::string Manifest::to_json_string() const {
  ordered_json j;
  j["format_version"] = kFormatVersion;

  ordered_json campaign;
  campaign["params_digest"] = params_digest;
  ordered_json jparams = ordered_json::array();
  for (const ParamEntry& e : params.entries()) {
    ordered_json entry;
    entry["key"] = e.key;
    entry["value"] = value_to_json(e.value);
    jparams.push_back(std::move(entry));
  }
  campaign["params"] = std::move(jparams);
  campaign["base_seed"] = base_seed;
  ordered_json jfactors = ordered_json::array();
  for (const FactorDef& f : space.factors()) {
    ordered_json jf;
    jf["name"] = f.name;
    jf["pattern"] = f.pattern;
    ordered_json levels = ordered_json::array();
    for (const Value& v : f.levels) levels.push_back(value_to_json(v));
    jf["levels"] = std::move(levels);
    jfactors.push_back(std::move(jf));
  }
  campaign["factors"] = std::move(jfactors);
  campaign["repetitions"] = space.repetitions();
  j["campaign"] = std::move(campaign);

  j["command_template"] = command_template;
  ordered_json jrecords = ordered_json::array();
  for (const RunRecord& r : records) jrecords.push_back(record_to_json(r));
  j["records"] = std::move(jrecords);

  return j.dump(2) + "\n";
}

Manifest Manifest::from_json_string(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const ordered_json::parse_error& e) {
    throw CampaignStateError(std::string("manifest is not valid JSON: ") + e.what());
  }
  try {
    int version = j.at("format_version").get<int>();
    if (version != kFormatVersion)
      throw CampaignStateError("manifest format_version " + std::to_string(version) +
                               " not supported (expected " + std::to_string(kFormatVersion) + ")");
    Manifest m;
    const ordered_json& campaign = j.at("campaign");
    m.params_digest = campaign.at("params_digest").get<std::string>();
    std::vector<ParamEntry> entries;
    for (const ordered_json& e : campaign.at("params"))
      entries.push_back({e.at("key").get<std::string>(), value_from_json(e.at("value")), 0});
    m.params = ParamSet(std::move(entries));
    m.base_seed = campaign.at("base_seed").get<std::uint64_t>();
    std::vector<FactorDef> factors;
    for (const ordered_json& jf : campaign.at("factors")) {
      std::vector<Value> levels;
      for (const ordered_json& lv : jf.at("levels")) levels.push_back(value_from_json(lv));
      factors.emplace_back(jf.at("name").get<std::string>(), jf.at("pattern").get<std::string>(),
                           std::move(levels));
    }
    m.space = FactorSpace(std::move(factors), campaign.at("repetitions").get<int>());
    m.command_template = j.at("command_template").get<std::string>();
    for (const ordered_json& jr : j.at("records")) {
      RunRecord r = record_from_json(jr);
      if (r.status == RunStatus::running) r.status = RunStatus::pending;
      m.records.push_back(std::move(r));
    }
    return m;
  } catch (const ordered_json::exception& e) {
    throw CampaignStateError(std::string("manifest schema error: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw CampaignStateError(std::string("manifest contains an invalid campaign: ") + e.what());
  }
}

void Manifest::save(const std::filesystem::path& path) const {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw CampaignStateError("cannot write manifest temp file " + tmp.string());
    out << to_json_string();
    if (!out.flush()) throw CampaignStateError("failed writing manifest " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec)
    throw CampaignStateError("failed to replace manifest " + path.string() + ": " + ec.message());
}

Manifest Manifest::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CampaignStateError("cannot open manifest " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return from_json_string(text);
}

}  // namespace simcamp
