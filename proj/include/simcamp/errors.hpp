#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace simcamp {

/// Problem in a campaign definition file (params or factors).
/// Carries the 1-based line number of the offending line.
class DefinitionError : public std::runtime_error {
 public:
  DefinitionError(const std::string& msg, std::size_t line)
      : std::runtime_error("line " + std::to_string(line) + ": " + msg), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Malformed selection predicate. Carries the 0-based character offset.
class PredicateSyntaxError : public std::runtime_error {
 public:
  PredicateSyntaxError(const std::string& msg, std::size_t offset)
      : std::runtime_error(msg + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

/// A predicate (or group-by list) referenced a factor the campaign does
/// not define.
class UnknownFactorError : public std::runtime_error {
 public:
  explicit UnknownFactorError(const std::string& factor)
      : std::runtime_error("unknown factor '" + factor + "'"), factor_(factor) {}
  const std::string& factor() const { return factor_; }

 private:
  std::string factor_;
};

/// Malformed result file. Carries line number and the offending text.
class ResultParseError : public std::runtime_error {
 public:
  ResultParseError(const std::string& msg, std::size_t line, std::string text)
      : std::runtime_error("line " + std::to_string(line) + ": " + msg + " [" + text + "]"),
        line_(line),
        text_(std::move(text)) {}
  std::size_t line() const { return line_; }
  const std::string& text() const { return text_; }

 private:
  std::size_t line_;
  std::string text_;
};

/// A result record references a run the manifest does not know about.
class OrphanRunError : public std::runtime_error {
 public:
  explicit OrphanRunError(const std::string& run_id)
      : std::runtime_error("result references unknown run '" + run_id + "'"), run_id_(run_id) {}
  const std::string& run_id() const { return run_id_; }

 private:
  std::string run_id_;
};

/// Statistical analysis cannot proceed (no matching records, incomplete
/// factorial design, bad parameters).
class AnalysisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Manifest cannot be read, written or is structurally invalid.
class CampaignStateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace simcamp
