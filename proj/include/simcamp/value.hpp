#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>

namespace simcamp {

/// Typed scalar used for parameter values and factor levels.
///
/// A Value is one of: 64-bit signed integer, double, bool, or string.
/// Its canonical text form is what appears in run keys, materialized
/// configuration files and CSV exports, so it must be byte-stable:
/// integers are plain decimal, floats use the shortest decimal that
/// round-trips, bools are `true`/`false`, strings are verbatim.
class Value {
 public:
  Value() : v_(std::int64_t{0}) {}

  static Value from_int(std::int64_t v) { return Value(Variant(v)); }
  static Value from_double(double v) { return Value(Variant(v)); }
  static Value from_bool(bool v) { return Value(Variant(v)); }
  static Value from_string(std::string v) { return Value(Variant(std::move(v))); }

  /// Infers the type of a raw text token: int, then float, then bool,
  /// then string verbatim. Never fails. Non-finite floats ("nan", "inf")
  /// are kept as strings so every numeric Value is finite.
  static Value infer(std::string_view text);

  bool is_int() const { return std::holds_alternative<std::int64_t>(v_); }
  bool is_double() const { return std::holds_alternative<double>(v_); }
  bool is_bool() const { return std::holds_alternative<bool>(v_); }
  bool is_string() const { return std::holds_alternative<std::string>(v_); }
  bool is_numeric() const { return is_int() || is_double(); }

  std::int64_t as_int() const { return std::get<std::int64_t>(v_); }
  double as_double() const { return std::get<double>(v_); }
  bool as_bool() const { return std::get<bool>(v_); }
  const std::string& as_string() const { return std::get<std::string>(v_); }

  /// Numeric value as double regardless of int/double storage.
  double to_double() const;

  std::string canonical() const;

  /// Canonical-form equality: int 100 and float 100.0 compare equal
  /// because they render identically. This is the equality used for
  /// duplicate-level detection and predicate matching, keeping run keys
  /// injective.
  bool same_canonical(const Value& other) const {
    return canonical() == other.canonical();
  }

  friend bool operator==(const Value&, const Value&) = default;

 private:
  using Variant = std::variant<std::int64_t, double, bool, std::string>;
  explicit Value(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

/// Shortest decimal rendering of a double that parses back to the same
/// bits (via std::to_chars).
std::string canonical_double(double v);

}  // namespace simcamp
