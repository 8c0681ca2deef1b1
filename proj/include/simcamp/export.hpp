#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "simcamp/tag.hpp"

namespace simcamp {

enum class ExportFormat { csv, jsonl };

/// RFC 4180 field quoting: fields containing commas, quotes or
/// newlines are wrapped in double quotes with embedded quotes doubled.
std::string csv_escape(std::string_view field);

/// Streams tagged scalars to CSV (`runkey,rep,<factors sorted>,module,
/// name,value`) or JSON lines. Deterministic bytes for deterministic
/// input; rows come out in the order they are written.
class ScalarExporter {
 public:
  ScalarExporter(std::ostream& out, ExportFormat format,
                 std::vector<std::string> factor_names);

  void write(const TaggedScalar& record);
  std::size_t rows() const { return rows_; }

 private:
  std::ostream& out_;
  ExportFormat format_;
  std::vector<std::string> factor_names_;  // sorted
  std::size_t rows_ = 0;
};

/// Same, for vector samples: `runkey,rep,<factors sorted>,vector,time,value`.
class SampleExporter {
 public:
  SampleExporter(std::ostream& out, ExportFormat format,
                 std::vector<std::string> factor_names);

  void write(const TaggedSample& sample);
  std::size_t rows() const { return rows_; }

 private:
  std::ostream& out_;
  ExportFormat format_;
  std::vector<std::string> factor_names_;
  std::size_t rows_ = 0;
};

/// The campaign's factor names sorted lexicographically: the factor
/// column order used by every export.
std::vector<std::string> sorted_factor_names(const FactorSpace& space);

}  // namespace simcamp
