#include "simcamp/tag.hpp"

#include "simcamp/errors.hpp"

namespace simcamp {

RunIndex::RunIndex(const Manifest& manifest) {
  by_key_.reserve(manifest.records.size());
  for (const RunRecord& r : manifest.records) by_key_.emplace(r.key, &r);
}

const RunRecord* RunIndex::find(std::string_view run_id) const {
  auto it = by_key_.find(run_id);
  return it == by_key_.end() ? nullptr : it->second;
}

const RunRecord* RunIndex::resolve(const std::string& run_id) const {
  const RunRecord* r = find(run_id);
  if (!r) throw OrphanRunError(run_id);
  return r;
}

std::optional<TaggedScalar> ScalarTagger::on(const ScaEvent& event) {
  if (const auto* run = std::get_if<ScaRun>(&event)) {
    current_ = index_->resolve(run->run_id);
    return std::nullopt;
  }
  if (const auto* scalar = std::get_if<ScalarRecord>(&event)) {
    if (!current_) throw OrphanRunError(scalar->run_id.empty() ? "<no run line>" : scalar->run_id);
    return TaggedScalar{current_, scalar->module, scalar->name, scalar->value, scalar->finite};
  }
  return std::nullopt;
}

std::optional<TaggedSample> SampleTagger::on(const VecEvent& event) {
  if (const auto* decl = std::get_if<VectorDecl>(&event)) {
    vector_names_.emplace(decl->id, decl->module + "." + decl->name);
    return std::nullopt;
  }
  const auto& sample = std::get<VectorSample>(event);
  return TaggedSample{run_, vector_names_.at(sample.id), sample.time, sample.value};
}

}  // namespace simcamp
