#include "simcamp/export.hpp"

#include <algorithm>
#include <ostream>

#include <json.hpp>

namespace simcamp {

namespace {

const Value* factor_value(const RunRecord& run, std::string_view name) {
  for (const auto& [n, v] : run.assignment)
    if (n == name) return &v;
  return nullptr;
}

nlohmann::ordered_json value_json(const Value& v) {
  if (v.is_int()) return v.as_int();
  if (v.is_double()) return v.as_double();
  if (v.is_bool()) return v.as_bool();
  return v.as_string();
}

nlohmann::ordered_json factors_json(const RunRecord& run,
                                    const std::vector<std::string>& names) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const std::string& name : names)
    if (const Value* v = factor_value(run, name)) j[name] = value_json(*v);
  return j;
}

}  // namespace

std::string csv_escape(std::string_view field) {
  bool needs_quotes = field.find_first_of(",\"\n\r") != std::string_view::npos;
  if (!needs_quotes) return std::string(field);
  std::string out;
  out.reserve(field.size() + 2);
  out += '"';
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::vector<std::string> sorted_factor_names(const FactorSpace& space) {
  std::vector<std::string> names;
  names.reserve(space.factors().size());
  for (const FactorDef& f : space.factors()) names.push_back(f.name);
  std::sort(names.begin(), names.end());
  return names;
}

ScalarExporter::ScalarExporter(std::ostream& out, ExportFormat format,
                               std::vector<std::string> factor_names)
    : out_(out), format_(format), factor_names_(std::move(factor_names)) {
  if (format_ == ExportFormat::csv) {
    out_ << "runkey,rep";
    for (const std::string& name : factor_names_) out_ << ',' << csv_escape(name);
    out_ << ",module,name,value\n";
  }
}

void ScalarExporter::write(const TaggedScalar& record) {
  const RunRecord& run = *record.run;
  if (format_ == ExportFormat::csv) {
    out_ << csv_escape(run.key) << ',' << run.rep;
    for (const std::string& name : factor_names_) {
      out_ << ',';
      if (const Value* v = factor_value(run, name)) out_ << csv_escape(v->canonical());
    }
    out_ << ',' << csv_escape(record.module) << ',' << csv_escape(record.name) << ','
         << canonical_double(record.value) << '\n';
  } else {
    nlohmann::ordered_json j;
    j["runkey"] = run.key;
    j["rep"] = run.rep;
    j["factors"] = factors_json(run, factor_names_);
    j["module"] = record.module;
    j["name"] = record.name;
    j["value"] = record.value;
    out_ << j.dump() << '\n';
  }
  ++rows_;
}

SampleExporter::SampleExporter(std::ostream& out, ExportFormat format,
                               std::vector<std::string> factor_names)
    : out_(out), format_(format), factor_names_(std::move(factor_names)) {
  if (format_ == ExportFormat::csv) {
    out_ << "runkey,rep";
    for (const std::string& name : factor_names_) out_ << ',' << csv_escape(name);
    out_ << ",vector,time,value\n";
  }
}

void SampleExporter::write(const TaggedSample& sample) {
  const RunRecord& run = *sample.run;
  if (format_ == ExportFormat::csv) {
    out_ << csv_escape(run.key) << ',' << run.rep;
    for (const std::string& name : factor_names_) {
      out_ << ',';
      if (const Value* v = factor_value(run, name)) out_ << csv_escape(v->canonical());
    }
    out_ << ',' << csv_escape(sample.vector) << ',' << canonical_double(sample.time) << ','
         << canonical_double(sample.value) << '\n';
  } else {
    nlohmann::ordered_json j;
    j["runkey"] = run.key;
    j["rep"] = run.rep;
    j["factors"] = factors_json(run, factor_names_);
    j["vector"] = sample.vector;
    j["time"] = sample.time;
    j["value"] = sample.value;
    out_ << j.dump() << '\n';
  }
  ++rows_;
}

}  // namespace simcamp
