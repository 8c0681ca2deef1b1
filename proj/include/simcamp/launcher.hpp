#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "simcamp/config_ini.hpp"
#include "simcamp/manifest.hpp"
#include "simcamp/predicate.hpp"

namespace simcamp {

/// Filesystem-safe form of a run key: `=` -> `-`, `,` -> `_`, `#` -> `+`.
/// The original key is always recoverable from the manifest.
std::string sanitize_run_key(std::string_view key);

/// Everything an executor needs to run one child process.
struct RunExecution {
  std::string run_key;
  std::string command;                 // template with placeholders substituted
  std::filesystem::path workdir;       // per-run directory (absolute)
  std::vector<std::pair<std::string, std::string>> extra_env;
};

struct ExecOutcome {
  bool launched = false;  // false: the process could not be spawned
  int exit_code = -1;
  std::string error;
};

/// Runs one child to completion. Implementations must be safe to call
/// from multiple worker threads at once.
class RunExecutor {
 public:
  virtual ~RunExecutor() = default;
  virtual ExecOutcome execute(const RunExecution& exec) = 0;
};

/// Spawns `/bin/sh -c <command>` in the run directory with the campaign
/// environment variables added, and waits for it.
class ProcessExecutor final : public RunExecutor {
 public:
  ExecOutcome execute(const RunExecution& exec) override;
};

/// Creates the campaign manifest: one pending record per selected run
/// point, with per-repetition seeds and the per-run config files
/// materialized under `outdir/runs/<sanitized key>/`.
///
/// The command template must contain `{config}`; recognized placeholders
/// are {config} {seed} {rep} {runkey} {outdir} and {<factorName>}.
/// Unknown placeholders are rejected here, not at launch time.
Manifest plan(const CampaignDef& def, const std::string& command_template, const Predicate& pred,
              const std::filesystem::path& outdir);

struct LaunchOptions {
  const Predicate* filter = nullptr;  // restricts which records are considered
  bool retry_failed = false;          // also re-run failed records (resume semantics)
};

struct LaunchReport {
  std::size_t selected = 0;  // records matching the filter
  std::size_t executed = 0;  // processes actually spawned this call
  std::size_t done = 0;      // selected records in done state afterwards
  std::size_t failed = 0;    // selected records in failed state afterwards
};

/// Executes every runnable record (pending, plus failed when
/// retry_failed) through a pool of at most `parallelism` concurrent
/// children. The manifest is re-persisted atomically to `manifest_path`
/// after every state transition, so a killed campaign can always be
/// resumed from disk.
LaunchReport launch(Manifest& manifest, const std::filesystem::path& manifest_path,
                    int parallelism, RunExecutor& executor, const LaunchOptions& options = {});

/// Resume semantics: re-runs pending and failed records, never touching
/// completed ones or their result files.
LaunchReport resume(Manifest& manifest, const std::filesystem::path& manifest_path,
                    int parallelism, RunExecutor& executor);

/// Grows the campaign to `new_repetitions`, adding pending records for
/// the new repetition indices of every configuration already present.
/// Existing records, their keys, seeds and result files are untouched;
/// record order is refreshed to the extended space's expand order.
/// Returns the number of added records.
std::size_t extend_repetitions(Manifest& manifest, int new_repetitions,
                               const std::filesystem::path& outdir);

}  // namespace simcamp
