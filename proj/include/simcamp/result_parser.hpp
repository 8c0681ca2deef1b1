#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

namespace simcamp {

/// In strict mode any unknown directive is an error; in lenient mode it
/// is skipped and counted. Malformed lines are errors in both modes.
enum class ParseMode { strict, lenient };

struct ScaRun {
  std::string run_id;
};
struct ScaAttr {
  std::string key, value;
};
struct ScaItervar {
  std::string name, value;
};
struct ScaParam {
  std::string pattern, value;
};
struct ScalarRecord {
  std::string run_id;  // from the enclosing `run` line, may be empty
  std::string module;
  std::string name;
  double value = 0;
  bool finite = true;  // false for nan/inf scalars
};

using ScaEvent = std::variant<ScaRun, ScaAttr, ScaItervar, ScaParam, ScalarRecord>;

/// Streaming reader for the SCA subset. One line is held in memory at a
/// time; peak memory is O(longest line) regardless of file size.
///
/// Grammar (space-separated tokens; double-quoted tokens may contain
/// spaces; blank lines and `#` comments are ignored):
///   version 3                      (optional, first content line only)
///   run <runId>
///   attr <key> <value>
///   itervar <name> <value>
///   param <pattern> <value>
///   scalar <module> <name> <float>
class ScaReader {
 public:
  explicit ScaReader(std::istream& in, ParseMode mode = ParseMode::strict);

  /// Next event, or nullopt at end of input. Throws ResultParseError.
  std::optional<ScaEvent> next();

  std::size_t line_number() const { return line_no_; }
  std::size_t skipped_lines() const { return skipped_; }

 private:
  std::istream& in_;
  ParseMode mode_;
  std::size_t line_no_ = 0;
  std::size_t skipped_ = 0;
  bool saw_content_ = false;
  std::string current_run_;
  std::string line_;
  std::vector<std::string> tokens_;
};

struct VectorDecl {
  long id = 0;
  std::string module;
  std::string name;
  std::string columns;  // always "TV" in the subset
};
struct VectorSample {
  long id = 0;
  double time = 0;
  double value = 0;
};

using VecEvent = std::variant<VectorDecl, VectorSample>;

/// Streaming reader for the VEC subset:
///   vector <id> <module> <name> TV
///   <id> <time> <value>
/// Memory is bounded by the number of declared vectors, never by the
/// number of samples. Non-monotone sample times are counted as warnings
/// by default; set monotone_error to make them hard errors.
class VecReader {
 public:
  explicit VecReader(std::istream& in, ParseMode mode = ParseMode::strict,
                     bool monotone_error = false);

  std::optional<VecEvent> next();

  std::size_t line_number() const { return line_no_; }
  std::size_t skipped_lines() const { return skipped_; }
  std::size_t monotonicity_warnings() const { return warnings_; }

 private:
  std::istream& in_;
  ParseMode mode_;
  bool monotone_error_;
  std::size_t line_no_ = 0;
  std::size_t skipped_ = 0;
  std::size_t warnings_ = 0;
  bool saw_content_ = false;
  std::unordered_map<long, double> last_time_;
  std::string line_;
  std::vector<std::string> tokens_;
};

}  // namespace simcamp
