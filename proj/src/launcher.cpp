#include "simcamp/launcher.hpp"

#include <spawn.h>
#include <sys/wait.h>

#include <atomic>
#include <condition_variable>
#include <cstring>
#include <ctime>
#include <deque>
#include <fstream>
#include <mutex>
#include <set>
#include <stdexcept>
#include <thread>
#include <unordered_map>

#include "simcamp/errors.hpp"
#include "simcamp/rng.hpp"

extern char** environ;

namespace simcamp {

namespace fs = std::filesystem;

std::string sanitize_run_key(std::string_view key) {
  std::string out;
  out.reserve(key.size());
  for (char c : key) {
    if (c == '=')
      out += '-';
    else if (c == ',')
      out += '_';
    else if (c == '#')
      out += '+';
    else
      out += c;
  }
  return out;
}

namespace {

bool known_placeholder(std::string_view token, const FactorSpace& space) {
  if (token == "config" || token == "seed" || token == "rep" || token == "runkey" ||
      token == "outdir")
    return true;
  return space.find(token) != nullptr;
}

void validate_template(const std::string& tmpl, const FactorSpace& space) {
  if (tmpl.find("{config}") == std::string::npos)
    throw std::invalid_argument("command template must contain the {config} placeholder");
  std::size_t pos = 0;
  while ((pos = tmpl.find('{', pos)) != std::string::npos) {
    auto end = tmpl.find('}', pos);
    if (end == std::string::npos)
      throw std::invalid_argument("command template has an unterminated placeholder");
    std::string_view token(tmpl.data() + pos + 1, end - pos - 1);
    if (!known_placeholder(token, space))
      throw std::invalid_argument("command template references unknown placeholder {" +
                                  std::string(token) + "}");
    pos = end + 1;
  }
}

std::string substitute(const std::string& tmpl,
                       const std::vector<std::pair<std::string, std::string>>& repl) {
  std::string out;
  out.reserve(tmpl.size());
  std::size_t pos = 0;
  while (pos < tmpl.size()) {
    if (tmpl[pos] == '{') {
      auto end = tmpl.find('}', pos);
      std::string_view token(tmpl.data() + pos + 1, end - pos - 1);
      for (const auto& [name, value] : repl)
        if (name == token) {
          out += value;
          break;
        }
      pos = end + 1;
    } else {
      out += tmpl[pos++];
    }
  }
  return out;
}

RunRecord make_record(const CampaignDef& def, const RunPoint& point, const fs::path& outdir) {
  RunRecord r;
  r.key = point.run_key();
  r.assignment = point.assignment;
  r.rep = point.rep;
  r.seed = seed_for(def.base_seed, point.rep);
  std::string rundir = "runs/" + sanitize_run_key(r.key);
  r.config_path = rundir + "/config.ini";
  r.sca_path = rundir + "/results.sca";
  r.vec_path = rundir + "/results.vec";

  fs::path dir = outdir / rundir;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw CampaignStateError("cannot create run directory " + dir.string());
  std::ofstream cfg(outdir / r.config_path, std::ios::binary | std::ios::trunc);
  if (!cfg || !(cfg << materialize(def, point)).flush())
    throw CampaignStateError("failed writing config file " + (outdir / r.config_path).string());
  return r;
}

RunPoint point_of(const RunRecord& r) {
  RunPoint p;
  p.assignment = r.assignment;
  p.rep = r.rep;
  return p;
}

// State transitions reported by workers to the serializer thread.
struct Event {
  std::size_t index;
  bool finished;
  ExecOutcome outcome;
};

class EventQueue {
 public:
  void push(Event e) {
    {
      std::lock_guard lock(mu_);
      queue_.push_back(std::move(e));
    }
    cv_.notify_one();
  }

  Event pop() {
    std::unique_lock lock(mu_);
    cv_.wait(lock, [&] { return !queue_.empty(); });
    Event e = std::move(queue_.front());
    queue_.pop_front();
    return e;
  }

 private:
  std::mutex mu_;
  std::condition_variable cv_;
  std::deque<Event> queue_;
};

std::string configuration_key(const RunRecord& r) {
  RunPoint p = point_of(r);
  std::string key = p.run_key();
  return key.substr(0, key.rfind("#r="));
}

}  // namespace

ExecOutcome ProcessExecutor::execute(const RunExecution& exec) {
  // Inherit the environment, overriding the campaign variables.
  std::vector<std::string> env_store;
  for (char** e = environ; *e; ++e) {
    std::string_view entry(*e);
    bool shadowed = false;
    for (const auto& [name, _] : exec.extra_env)
      if (entry.size() > name.size() && entry.compare(0, name.size(), name) == 0 &&
          entry[name.size()] == '=') {
        shadowed = true;
        break;
      }
    if (!shadowed) env_store.emplace_back(entry);
  }
  for (const auto& [name, value] : exec.extra_env) env_store.push_back(name + "=" + value);
  std::vector<char*> envp;
  envp.reserve(env_store.size() + 1);
  for (std::string& s : env_store) envp.push_back(s.data());
  envp.push_back(nullptr);

  const char* argv[] = {"/bin/sh", "-c", exec.command.c_str(), nullptr};

  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_addchdir_np(&actions, exec.workdir.c_str());

  pid_t pid = -1;
  int rc = posix_spawn(&pid, "/bin/sh", &actions, nullptr, const_cast<char**>(argv),
                       envp.data());
  posix_spawn_file_actions_destroy(&actions);
  if (rc != 0) return {false, -1, std::string("spawn failed: ") + std::strerror(rc)};

  int status = 0;
  pid_t waited;
  do {
    waited = waitpid(pid, &status, 0);
  } while (waited < 0 && errno == EINTR);
  if (waited < 0) return {false, -1, std::string("waitpid failed: ") + std::strerror(errno)};
  if (WIFEXITED(status)) return {true, WEXITSTATUS(status), ""};
  if (WIFSIGNALED(status))
    return {true, 128 + WTERMSIG(status),
            "terminated by signal " + std::to_string(WTERMSIG(status))};
  return {false, -1, "unexpected wait status"};
}

Manifest plan(const CampaignDef& def, const std::string& command_template, const Predicate& pred,
              const fs::path& outdir) {
  validate_template(command_template, def.space);
  pred.validate(def.space);

  Manifest m;
  m.params_digest = params_digest(def.params);
  m.params = def.params;
  m.space = def.space;
  m.base_seed = def.base_seed;
  m.command_template = command_template;

  for (const RunPoint& point : select(def.space.expand(), pred))
    m.records.push_back(make_record(def, point, outdir));
  return m;
}

LaunchReport launch(Manifest& manifest, const fs::path& manifest_path, int parallelism,
                    RunExecutor& executor, const LaunchOptions& options) {
  if (parallelism < 1) throw std::invalid_argument("parallelism must be >= 1");
  validate_template(manifest.command_template, manifest.space);
  if (options.filter) options.filter->validate(manifest.space);

  const fs::path base = manifest_path.parent_path();

  LaunchReport report;
  std::vector<std::size_t> jobs;
  for (std::size_t i = 0; i < manifest.records.size(); ++i) {
    const RunRecord& r = manifest.records[i];
    if (options.filter && !options.filter->matches(point_of(r))) continue;
    ++report.selected;
    if (r.status == RunStatus::pending ||
        (options.retry_failed && r.status == RunStatus::failed))
      jobs.push_back(i);
  }

  EventQueue events;
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};

  auto worker = [&] {
    for (;;) {
      if (stop.load()) return;
      std::size_t slot = next.fetch_add(1);
      if (slot >= jobs.size()) return;
      std::size_t index = jobs[slot];
      const RunRecord& r = manifest.records[index];

      RunExecution exec;
      exec.run_key = r.key;
      exec.workdir = base / fs::path(r.config_path).parent_path();
      std::vector<std::pair<std::string, std::string>> repl = {
          {"config", (base / r.config_path).string()},
          {"outdir", exec.workdir.string()},
          {"runkey", r.key},
          {"seed", std::to_string(r.seed)},
          {"rep", std::to_string(r.rep)},
      };
      for (const auto& [name, value] : r.assignment) repl.emplace_back(name, value.canonical());
      exec.command = substitute(manifest.command_template, repl);
      exec.extra_env = {{"CAMPAIGN_RUNKEY", r.key},
                        {"CAMPAIGN_SEED", std::to_string(r.seed)},
                        {"CAMPAIGN_REP", std::to_string(r.rep)}};

      // A re-run owns its output directory: drop stale results first.
      std::error_code ec;
      fs::create_directories(exec.workdir, ec);
      fs::remove(base / r.sca_path, ec);
      fs::remove(base / r.vec_path, ec);

      events.push({index, false, {}});
      ExecOutcome outcome;
      try {
        outcome = executor.execute(exec);
      } catch (const std::exception& e) {
        outcome = {false, -1, std::string("executor error: ") + e.what()};
      }
      events.push({index, true, std::move(outcome)});
    }
  };

  std::vector<std::thread> threads;
  std::size_t pool = std::min<std::size_t>(static_cast<std::size_t>(parallelism), jobs.size());
  threads.reserve(pool);
  for (std::size_t i = 0; i < pool; ++i) threads.emplace_back(worker);

  // Serializer: the only owner of manifest writes. Applies each
  // transition and persists atomically before touching the next one.
  std::size_t finished = 0;
  std::exception_ptr save_error;
  while (finished < jobs.size()) {
    Event e = events.pop();
    RunRecord& r = manifest.records[e.index];
    if (!e.finished) {
      r.status = RunStatus::running;
      r.started_at = static_cast<std::int64_t>(std::time(nullptr));
      r.finished_at.reset();
      r.exit_code.reset();
      r.error.clear();
    } else {
      ++finished;
      r.finished_at = static_cast<std::int64_t>(std::time(nullptr));
      if (e.outcome.launched) {
        r.exit_code = e.outcome.exit_code;
        r.status = e.outcome.exit_code == 0 ? RunStatus::done : RunStatus::failed;
        r.error = e.outcome.error;
      } else {
        r.status = RunStatus::failed;
        r.error = e.outcome.error.empty() ? "launch failed" : e.outcome.error;
      }
      ++report.executed;
    }
    if (!save_error) {
      try {
        manifest.save(manifest_path);
      } catch (...) {
        // Stop handing out work, drain remaining events, then rethrow.
        save_error = std::current_exception();
        stop.store(true);
      }
    }
  }
  for (std::thread& t : threads) t.join();
  if (save_error) std::rethrow_exception(save_error);

  for (std::size_t i = 0; i < manifest.records.size(); ++i) {
    const RunRecord& r = manifest.records[i];
    if (options.filter && !options.filter->matches(point_of(r))) continue;
    if (r.status == RunStatus::done) ++report.done;
    if (r.status == RunStatus::failed) ++report.failed;
  }
  return report;
}

LaunchReport resume(Manifest& manifest, const fs::path& manifest_path, int parallelism,
                    RunExecutor& executor) {
  LaunchOptions options;
  options.retry_failed = true;
  return launch(manifest, manifest_path, parallelism, executor, options);
}

std::size_t extend_repetitions(Manifest& manifest, int new_repetitions, const fs::path& outdir) {
  int old_reps = manifest.space.repetitions();
  if (new_repetitions <= old_reps)
    throw std::invalid_argument("new repetition count " + std::to_string(new_repetitions) +
                                " must exceed current " + std::to_string(old_reps));

  CampaignDef def = manifest.campaign_def();
  FactorSpace extended(manifest.space.factors(), new_repetitions);

  std::set<std::string> present;
  std::unordered_map<std::string, std::size_t> by_key;
  for (std::size_t i = 0; i < manifest.records.size(); ++i) {
    present.insert(configuration_key(manifest.records[i]));
    by_key.emplace(manifest.records[i].key, i);
  }

  std::vector<RunRecord> merged;
  std::size_t added = 0;
  std::uint64_t n = extended.count();
  for (std::uint64_t i = 0; i < n; ++i) {
    RunPoint point = extended.point_at(i);
    std::string key = point.run_key();
    if (auto it = by_key.find(key); it != by_key.end()) {
      merged.push_back(std::move(manifest.records[it->second]));
      continue;
    }
    if (!present.count(key.substr(0, key.rfind("#r=")))) continue;
    merged.push_back(make_record(def, point, outdir));
    ++added;
  }

  manifest.space = std::move(extended);
  manifest.records = std::move(merged);
  return added;
}

}  // namespace simcamp
