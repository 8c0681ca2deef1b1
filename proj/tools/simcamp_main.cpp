// Campaign toolchain front-end: define, execute, parse and analyze
// simulation campaigns through factor-based run identity.
//
// Exit codes (stable contract):
//   0 success
//   1 usage error
//   2 definition-file parse error
//   3 one or more runs failed
//   4 data / result-parse error
//   5 analysis error

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "simcamp/analyzer.hpp"
#include "simcamp/config_ini.hpp"
#include "simcamp/errors.hpp"
#include "simcamp/export.hpp"
#include "simcamp/launcher.hpp"
#include "simcamp/manifest.hpp"
#include "simcamp/predicate.hpp"
#include "simcamp/result_parser.hpp"
#include "simcamp/tag.hpp"

namespace fs = std::filesystem;
using namespace simcamp;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitDefinition = 2;
constexpr int kExitRunFailures = 3;
constexpr int kExitData = 4;
constexpr int kExitAnalysis = 5;

constexpr const char* kDefaultTemplate = "mocksim --config {config} --out {outdir}";

struct CliError {
  int code;
  std::string message;
};

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliError{kExitDefinition, "cannot open " + path.string()};
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

fs::path resolve_manifest(const std::string& arg) {
  if (!arg.empty()) return arg;
  if (const char* env = std::getenv("CAMPAIGN_MANIFEST"); env && *env) return env;
  throw CliError{kExitUsage, "no manifest given (pass a path or set CAMPAIGN_MANIFEST)"};
}

fs::path manifest_base(const fs::path& manifest_path) {
  fs::path base = manifest_path.parent_path();
  return base.empty() ? fs::path(".") : base;
}

Manifest load_manifest(const fs::path& path) {
  try {
    return Manifest::load(path);
  } catch (const CampaignStateError& e) {
    throw CliError{kExitData, e.what()};
  }
}

std::vector<std::string> split_list(const std::string& csv) {
  std::vector<std::string> out;
  std::string item;
  std::stringstream ss(csv);
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

// Streams every scalar of every done run through `sink`.
template <typename Sink>
void for_each_done_scalar(const Manifest& manifest, const fs::path& base, ParseMode mode,
                          Sink&& sink) {
  RunIndex index(manifest);
  for (const RunRecord& record : manifest.records) {
    if (record.status != RunStatus::done) continue;
    fs::path sca = base / record.sca_path;
    std::ifstream in(sca, std::ios::binary);
    if (!in) throw CliError{kExitData, "missing result file " + sca.string()};
    ScaReader reader(in, mode);
    ScalarTagger tagger(index);
    try {
      while (auto event = reader.next())
        if (auto tagged = tagger.on(*event)) sink(*tagged);
    } catch (const ResultParseError& e) {
      throw CliError{kExitData, sca.string() + ": " + e.what()};
    } catch (const OrphanRunError& e) {
      throw CliError{kExitData, sca.string() + ": " + e.what()};
    }
  }
}

std::size_t count_done(const Manifest& manifest) {
  std::size_t done = 0;
  for (const RunRecord& r : manifest.records)
    if (r.status == RunStatus::done) ++done;
  return done;
}

// Writes table/export text to --out or stdout.
void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
  if (!out || !(out << text).flush())
    throw CliError{kExitData, "cannot write output file " + out_path};
}

int cmd_generate(const std::string& params_path, const std::string& factors_path,
                 const std::string& outdir, const std::string& cmd_template, bool force) {
  CampaignDef def;
  try {
    def = CampaignDef::assemble(parse_params(read_file(params_path)),
                                parse_factors(read_file(factors_path)));
  } catch (const DefinitionError& e) {
    throw CliError{kExitDefinition, e.what()};
  } catch (const std::invalid_argument& e) {
    throw CliError{kExitDefinition, e.what()};
  }

  fs::path out(outdir);
  fs::path manifest_path = out / "manifest.json";
  if (!force && fs::exists(manifest_path))
    throw CliError{kExitUsage, manifest_path.string() +
                                   " already exists (use --force to overwrite, or `simcamp "
                                   "extend` to grow repetitions)"};
  fs::create_directories(out);

  Manifest manifest;
  try {
    manifest = plan(def, cmd_template, Predicate(), out);
  } catch (const std::invalid_argument& e) {
    throw CliError{kExitUsage, e.what()};
  }
  manifest.save(manifest_path);
  std::cout << manifest.records.size() << " runs\n";
  if (manifest.records.empty()) std::cerr << "warning: empty run selection\n";
  return 0;
}

int cmd_run(const std::string& manifest_arg, int parallelism, const std::string& filter_text,
            const std::string& cmd_template, bool retry_failed) {
  fs::path manifest_path = resolve_manifest(manifest_arg);
  Manifest manifest = load_manifest(manifest_path);
  if (!cmd_template.empty()) manifest.command_template = cmd_template;

  Predicate filter;
  try {
    filter = Predicate::parse(filter_text);
    filter.validate(manifest.space);
  } catch (const PredicateSyntaxError& e) {
    throw CliError{kExitUsage, std::string("bad --filter: ") + e.what()};
  } catch (const UnknownFactorError& e) {
    throw CliError{kExitUsage, std::string("bad --filter: ") + e.what()};
  }

  LaunchOptions options;
  options.filter = &filter;
  options.retry_failed = retry_failed;
  ProcessExecutor executor;
  LaunchReport report;
  try {
    report = launch(manifest, manifest_path, parallelism, executor, options);
  } catch (const CampaignStateError& e) {
    throw CliError{kExitData, e.what()};
  } catch (const std::invalid_argument& e) {
    throw CliError{kExitUsage, e.what()};
  }

  std::cerr << "selected " << report.selected << ", executed " << report.executed << ", done "
            << report.done << ", failed " << report.failed << "\n";
  if (report.done != report.selected) {
    for (const RunRecord& r : manifest.records)
      if (r.status == RunStatus::failed)
        std::cerr << "failed: " << r.key
                  << (r.exit_code ? " (exit " + std::to_string(*r.exit_code) + ")" : "")
                  << (r.error.empty() ? "" : " " + r.error) << "\n";
    return kExitRunFailures;
  }
  return 0;
}

int cmd_parse(const std::string& manifest_arg, const std::string& out_path,
              const std::string& format_name, const std::string& kind,
              const std::string& metric, bool lenient) {
  fs::path manifest_path = resolve_manifest(manifest_arg);
  Manifest manifest = load_manifest(manifest_path);
  fs::path base = manifest_base(manifest_path);
  if (count_done(manifest) == 0)
    throw CliError{kExitData, "no completed runs in " + manifest_path.string()};

  ExportFormat format = format_name == "jsonl" ? ExportFormat::jsonl : ExportFormat::csv;
  ParseMode mode = lenient ? ParseMode::lenient : ParseMode::strict;

  std::ostringstream buffer;
  std::size_t rows = 0;
  if (kind == "vectors") {
    SampleExporter exporter(buffer, format, sorted_factor_names(manifest.space));
    for (const RunRecord& record : manifest.records) {
      if (record.status != RunStatus::done) continue;
      fs::path vec = base / record.vec_path;
      std::ifstream in(vec, std::ios::binary);
      if (!in) throw CliError{kExitData, "missing result file " + vec.string()};
      VecReader reader(in, mode);
      SampleTagger tagger(record);
      try {
        while (auto event = reader.next())
          if (auto sample = tagger.on(*event)) {
            if (!metric.empty() && sample->vector.find(metric) == std::string::npos) continue;
            exporter.write(*sample);
          }
      } catch (const ResultParseError& e) {
        throw CliError{kExitData, vec.string() + ": " + e.what()};
      }
    }
    rows = exporter.rows();
  } else {
    ScalarExporter exporter(buffer, format, sorted_factor_names(manifest.space));
    for_each_done_scalar(manifest, base, mode, [&](const TaggedScalar& tagged) {
      if (!metric.empty() && tagged.name != metric) return;
      exporter.write(tagged);
    });
    rows = exporter.rows();
  }

  emit(buffer.str(), out_path);
  std::cerr << rows << " records\n";
  return 0;
}

struct AnalyzeArgs {
  std::string manifest;
  std::string metric;
  std::string by;
  std::string factors;
  double level = 0.95;
  std::string out;
  int digits = 6;
  bool lenient = false;
};

int cmd_analyze_mean(const AnalyzeArgs& args) {
  fs::path manifest_path = resolve_manifest(args.manifest);
  Manifest manifest = load_manifest(manifest_path);
  GroupMeanAccumulator acc(args.metric, split_list(args.by), args.level);
  for_each_done_scalar(manifest, manifest_base(manifest_path),
                       args.lenient ? ParseMode::lenient : ParseMode::strict,
                       [&](const TaggedScalar& t) { acc.add(t); });
  if (acc.skipped_non_finite() > 0)
    std::cerr << "warning: skipped " << acc.skipped_non_finite() << " non-finite values\n";
  emit(table_mean(acc.finish(), split_list(args.by), args.digits), args.out);
  return 0;
}

int cmd_analyze_ecdf(const AnalyzeArgs& args) {
  fs::path manifest_path = resolve_manifest(args.manifest);
  Manifest manifest = load_manifest(manifest_path);
  GroupSampleCollector collector(args.metric, {});
  for_each_done_scalar(manifest, manifest_base(manifest_path),
                       args.lenient ? ParseMode::lenient : ParseMode::strict,
                       [&](const TaggedScalar& t) { collector.add(t); });
  auto groups = collector.finish();
  emit(table_ecdf(ecdf(groups.front().samples), args.digits), args.out);
  return 0;
}

int cmd_analyze_box(const AnalyzeArgs& args) {
  fs::path manifest_path = resolve_manifest(args.manifest);
  Manifest manifest = load_manifest(manifest_path);
  auto by = split_list(args.by);
  GroupSampleCollector collector(args.metric, by);
  for_each_done_scalar(manifest, manifest_base(manifest_path),
                       args.lenient ? ParseMode::lenient : ParseMode::strict,
                       [&](const TaggedScalar& t) { collector.add(t); });
  std::vector<GroupFiveNumber> rows;
  for (const auto& group : collector.finish()) {
    GroupFiveNumber row;
    row.coords = group.coords;
    row.n = group.samples.size();
    row.summary = five_number(group.samples);
    rows.push_back(std::move(row));
  }
  emit(table_box(rows, by, args.digits), args.out);
  return 0;
}

int cmd_analyze_factorial(const AnalyzeArgs& args) {
  fs::path manifest_path = resolve_manifest(args.manifest);
  Manifest manifest = load_manifest(manifest_path);
  std::vector<std::string> factor_names = split_list(args.factors);
  if (factor_names.empty())
    throw CliError{kExitUsage, "factorial analysis needs --factors f1,f2,..."};

  // Map each factor's two declared levels onto -1 (first) and +1 (second).
  std::vector<const FactorDef*> defs;
  for (const std::string& name : factor_names) {
    const FactorDef* def = manifest.space.find(name);
    if (!def) throw AnalysisError("unknown factor '" + name + "'");
    if (def->levels.size() != 2)
      throw AnalysisError("factor '" + name + "' has " + std::to_string(def->levels.size()) +
                          " levels; factorial analysis needs exactly 2");
    defs.push_back(def);
  }

  std::map<std::vector<int>, std::vector<double>> cells;
  std::size_t skipped = 0;
  for_each_done_scalar(manifest, manifest_base(manifest_path),
                       args.lenient ? ParseMode::lenient : ParseMode::strict,
                       [&](const TaggedScalar& t) {
                         if (t.name != args.metric) return;
                         if (!t.finite) {
                           ++skipped;
                           return;
                         }
                         std::vector<int> signs;
                         signs.reserve(defs.size());
                         for (const FactorDef* def : defs) {
                           const Value* v = nullptr;
                           for (const auto& [n, value] : t.run->assignment)
                             if (n == def->name) v = &value;
                           if (!v) throw AnalysisError("run " + t.run->key +
                                                       " lacks factor '" + def->name + "'");
                           signs.push_back(v->same_canonical(def->levels[0]) ? -1 : 1);
                         }
                         cells[std::move(signs)].push_back(t.value);
                       });
  if (skipped > 0) std::cerr << "warning: skipped " << skipped << " non-finite values\n";
  if (cells.empty()) throw AnalysisError("no records match metric '" + args.metric + "'");
  FactorialResult result = factorial_2kr(factor_names, cells, args.level);
  emit(table_factorial(result, args.digits), args.out);
  return 0;
}

int cmd_status(const std::string& manifest_arg) {
  fs::path manifest_path = resolve_manifest(manifest_arg);
  Manifest manifest = load_manifest(manifest_path);
  std::size_t pending = 0, running = 0, done = 0, failed = 0;
  for (const RunRecord& r : manifest.records) {
    switch (r.status) {
      case RunStatus::pending: ++pending; break;
      case RunStatus::running: ++running; break;
      case RunStatus::done: ++done; break;
      case RunStatus::failed: ++failed; break;
    }
  }
  std::cout << "total " << manifest.records.size() << "\npending " << pending << "\nrunning "
            << running << "\ndone " << done << "\nfailed " << failed << "\n";
  return 0;
}

int cmd_extend(const std::string& manifest_arg, int reps) {
  fs::path manifest_path = resolve_manifest(manifest_arg);
  Manifest manifest = load_manifest(manifest_path);
  std::size_t added = 0;
  try {
    added = extend_repetitions(manifest, reps, manifest_base(manifest_path));
  } catch (const std::invalid_argument& e) {
    throw CliError{kExitUsage, e.what()};
  } catch (const CampaignStateError& e) {
    throw CliError{kExitData, e.what()};
  }
  manifest.save(manifest_path);
  std::cout << "added " << added << " runs\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"simcamp: simulation campaign toolchain"};
  app.require_subcommand(1);

  // generate
  auto* generate = app.add_subcommand("generate", "create a campaign from definition files");
  std::string params_path, factors_path, outdir;
  std::string gen_template = kDefaultTemplate;
  bool force = false;
  generate->add_option("params", params_path, "fixed-parameters file")->required();
  generate->add_option("factors", factors_path, "factors file")->required();
  generate->add_option("--out", outdir, "campaign output directory")->required();
  generate->add_option("--cmd", gen_template, "command template (must contain {config})");
  generate->add_flag("--force", force, "overwrite an existing manifest");

  // run
  auto* run = app.add_subcommand("run", "execute pending runs");
  std::string run_manifest, filter_text, run_template;
  int parallelism = 1;
  bool retry_failed = false;
  run->add_option("manifest", run_manifest, "manifest path (default $CAMPAIGN_MANIFEST)");
  run->add_option("-j,--parallel", parallelism, "max concurrent simulator processes")
      ->check(CLI::PositiveNumber);
  run->add_option("--filter", filter_text, "factor predicate, e.g. \"factA=100 and factB in {1,2}\"");
  run->add_option("--cmd", run_template, "override the stored command template");
  run->add_flag("--retry-failed", retry_failed, "also re-run failed records");

  // parse
  auto* parse = app.add_subcommand("parse", "export tagged results");
  std::string parse_manifest, parse_out, parse_format = "csv", parse_kind = "scalars",
              parse_metric;
  bool parse_lenient = false;
  parse->add_option("manifest", parse_manifest, "manifest path (default $CAMPAIGN_MANIFEST)");
  parse->add_option("--out", parse_out, "output file (default stdout)");
  parse->add_option("--format", parse_format, "csv or jsonl")
      ->check(CLI::IsMember({"csv", "jsonl"}));
  parse->add_option("--kind", parse_kind, "scalars or vectors")
      ->check(CLI::IsMember({"scalars", "vectors"}));
  parse->add_option("--metric", parse_metric, "only this metric");
  parse->add_flag("--lenient", parse_lenient, "skip unknown directives instead of failing");

  // analyze
  auto* analyze = app.add_subcommand("analyze", "produce plot-ready statistics");
  analyze->require_subcommand(1);
  AnalyzeArgs args;
  auto add_common = [&](CLI::App* sub, bool with_level) {
    sub->add_option("manifest", args.manifest, "manifest path (default $CAMPAIGN_MANIFEST)");
    sub->add_option("--metric", args.metric, "scalar metric name")->required();
    sub->add_option("--out", args.out, "output file (default stdout)");
    sub->add_option("--digits", args.digits, "significant digits for floats")
        ->check(CLI::PositiveNumber);
    sub->add_flag("--lenient", args.lenient, "lenient result parsing");
    if (with_level)
      sub->add_option("--level", args.level, "confidence level (default 0.95)");
  };
  auto* mean = analyze->add_subcommand("mean", "per-group means with confidence intervals");
  add_common(mean, true);
  mean->add_option("--by", args.by, "comma-separated group-by factors");
  auto* ecdf_cmd = analyze->add_subcommand("ecdf", "empirical CDF of a metric");
  add_common(ecdf_cmd, false);
  auto* box = analyze->add_subcommand("box", "five-number summaries");
  add_common(box, false);
  box->add_option("--by", args.by, "comma-separated group-by factors");
  auto* factorial_cmd = analyze->add_subcommand("factorial", "2^k r factorial analysis");
  add_common(factorial_cmd, true);
  factorial_cmd->add_option("--factors", args.factors, "comma-separated two-level factors")
      ->required();

  // status
  auto* status = app.add_subcommand("status", "run counts by state");
  std::string status_manifest;
  status->add_option("manifest", status_manifest, "manifest path (default $CAMPAIGN_MANIFEST)");

  // extend
  auto* extend = app.add_subcommand("extend", "grow the campaign's repetition count");
  std::string extend_manifest;
  int extend_reps = 0;
  extend->add_option("manifest", extend_manifest, "manifest path (default $CAMPAIGN_MANIFEST)");
  extend->add_option("--reps", extend_reps, "new total repetition count")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (generate->parsed())
      return cmd_generate(params_path, factors_path, outdir, gen_template, force);
    if (run->parsed())
      return cmd_run(run_manifest, parallelism, filter_text, run_template, retry_failed);
    if (parse->parsed())
      return cmd_parse(parse_manifest, parse_out, parse_format, parse_kind, parse_metric,
                       parse_lenient);
    if (analyze->parsed()) {
      if (mean->parsed()) return cmd_analyze_mean(args);
      if (ecdf_cmd->parsed()) return cmd_analyze_ecdf(args);
      if (box->parsed()) return cmd_analyze_box(args);
      if (factorial_cmd->parsed()) return cmd_analyze_factorial(args);
    }
    if (status->parsed()) return cmd_status(status_manifest);
    if (extend->parsed()) return cmd_extend(extend_manifest, extend_reps);
  } catch (const CliError& e) {
    std::cerr << "simcamp: " << e.message << "\n";
    return e.code;
  } catch (const AnalysisError& e) {
    std::cerr << "simcamp: " << e.what() << "\n";
    return kExitAnalysis;
  } catch (const UnknownFactorError& e) {
    std::cerr << "simcamp: " << e.what() << "\n";
    return kExitAnalysis;
  } catch (const ResultParseError& e) {
    std::cerr << "simcamp: " << e.what() << "\n";
    return kExitData;
  } catch (const CampaignStateError& e) {
    std::cerr << "simcamp: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "simcamp: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
