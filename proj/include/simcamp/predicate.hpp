#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "simcamp/factor_space.hpp"
#include "simcamp/value.hpp"

namespace simcamp {

/// Factor-based run selection. The grammar is conjunctive:
///
///   pred   := clause ("and" clause)* | <empty>
///   clause := name ("=" | "!=") value
///           | name "in" "{" value ("," value)* "}"
///
/// An empty predicate matches everything. Values are type-inferred the
/// same way as in definition files; matching compares canonical forms,
/// so `factA=100` matches both the integer 100 and the float 100.0.
class Predicate {
 public:
  enum class Op { eq, ne, in };

  struct Clause {
    std::string factor;
    Op op;
    std::vector<Value> values;
  };

  /// Match-all predicate.
  Predicate() = default;

  /// Throws PredicateSyntaxError with a character offset on malformed
  /// input. References to unknown factors are not detected here; they
  /// surface when the predicate is evaluated or validated.
  static Predicate parse(std::string_view text);

  /// Throws UnknownFactorError if the point does not carry a referenced
  /// factor.
  bool matches(const RunPoint& point) const;

  /// Checks every referenced factor exists in the space.
  void validate(const FactorSpace& space) const;

  bool match_all() const { return clauses_.empty(); }
  const std::vector<Clause>& clauses() const { return clauses_; }

 private:
  std::vector<Clause> clauses_;
};

/// Order-preserving filter of `points` by `pred`.
std::vector<RunPoint> select(const std::vector<RunPoint>& points, const Predicate& pred);

}  // namespace simcamp
