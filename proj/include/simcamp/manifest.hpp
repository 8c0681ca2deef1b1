#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "simcamp/config_ini.hpp"
#include "simcamp/factor_space.hpp"

namespace simcamp {

enum class RunStatus { pending, running, done, failed };

std::string_view to_string(RunStatus s);
RunStatus run_status_from_string(std::string_view s);

/// Persistent state of one run. Paths are stored relative to the
/// manifest's directory so a campaign tree can be moved as a whole.
struct RunRecord {
  std::string key;
  std::vector<std::pair<std::string, Value>> assignment;
  int rep = 0;
  RunStatus status = RunStatus::pending;
  std::uint64_t seed = 0;
  std::optional<int> exit_code;
  std::string config_path;
  std::string sca_path;
  std::string vec_path;
  std::optional<std::int64_t> started_at;   // UTC seconds
  std::optional<std::int64_t> finished_at;  // UTC seconds
  std::string error;                        // launch failure reason, if any
};

/// Whole-campaign state: the definition it was planned from, the command
/// template, and one record per run in expand order. Serialized as JSON
/// with a format_version tag and stable key order.
struct Manifest {
  static constexpr int kFormatVersion = 1;

  std::string params_digest;
  ParamSet params;
  FactorSpace space;
  std::uint64_t base_seed = 0;
  std::string command_template;
  std::vector<RunRecord> records;

  RunRecord* find(std::string_view key);
  const RunRecord* find(std::string_view key) const;

  CampaignDef campaign_def() const;

  /// Atomic save: writes a temp file next to `path`, then renames.
  void save(const std::filesystem::path& path) const;

  /// Loads and validates. Records left in `running` state by a crashed
  /// launcher are demoted to `pending` (a loaded manifest cannot have
  /// live children). Throws CampaignStateError.
  static Manifest load(const std::filesystem::path& path);

  std::string to_json_string() const;
  static Manifest from_json_string(const std::string& text);
};

}  // namespace simcamp
