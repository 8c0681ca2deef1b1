#include "simcamp/value.hpp"

#include <charconv>
#include <cmath>

namespace simcamp {

std::string canonical_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

Value Value::infer(std::string_view text) {
  const char* b = text.data();
  const char* e = b + text.size();

  if (!text.empty()) {
    std::int64_t i = 0;
    auto r = std::from_chars(b, e, i);
    if (r.ec == std::errc() && r.ptr == e) return from_int(i);

    double d = 0;
    auto rf = std::from_chars(b, e, d);
    if (rf.ec == std::errc() && rf.ptr == e && std::isfinite(d)) return from_double(d);
  }

  if (text == "true") return from_bool(true);
  if (text == "false") return from_bool(false);
  return from_string(std::string(text));
}

double Value::to_double() const {
  if (is_int()) return static_cast<double>(as_int());
  return as_double();
}

std::string Value::canonical() const {
  if (is_int()) return std::to_string(as_int());
  if (is_double()) return canonical_double(as_double());
  if (is_bool()) return as_bool() ? "true" : "false";
  return as_string();
}

}  // namespace simcamp
