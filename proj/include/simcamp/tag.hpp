#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>

#include "simcamp/manifest.hpp"
#include "simcamp/result_parser.hpp"

namespace simcamp {

/// A scalar observation joined with its run's identity and factors.
/// `run` borrows from the manifest the index was built over.
struct TaggedScalar {
  const RunRecord* run = nullptr;
  std::string module;
  std::string name;
  double value = 0;
  bool finite = true;
};

/// A vector sample joined with its run and vector identity.
struct TaggedSample {
  const RunRecord* run = nullptr;
  std::string vector;  // "<module>.<name>" of the declaring vector
  double time = 0;
  double value = 0;
};

/// Run-key -> record lookup over an immutable manifest snapshot.
class RunIndex {
 public:
  explicit RunIndex(const Manifest& manifest);
  const RunRecord* find(std::string_view run_id) const;
  /// Like find, but throws OrphanRunError when the run is unknown.
  const RunRecord* resolve(const std::string& run_id) const;

 private:
  std::unordered_map<std::string_view, const RunRecord*> by_key_;
};

/// Streaming join of SCA events with the manifest: feed every event in
/// file order; scalar events come back tagged, bookkeeping events
/// (run/attr/itervar/param) return nullopt. Unknown run ids throw
/// OrphanRunError as soon as the `run` line is seen.
class ScalarTagger {
 public:
  explicit ScalarTagger(const RunIndex& index) : index_(&index) {}

  std::optional<TaggedScalar> on(const ScaEvent& event);

 private:
  const RunIndex* index_;
  const RunRecord* current_ = nullptr;
};

/// Tags samples of one vector file, which carries no run line of its
/// own: the owning record comes from the manifest entry whose vec_path
/// was parsed.
class SampleTagger {
 public:
  explicit SampleTagger(const RunRecord& run) : run_(&run) {}

  std::optional<TaggedSample> on(const VecEvent& event);

 private:
  const RunRecord* run_;
  std::unordered_map<long, std::string> vector_names_;
};

}  // namespace simcamp
