#include "simcamp/predicate.hpp"

#include <cctype>

#include "simcamp/errors.hpp"

namespace simcamp {

namespace {

// Hand-rolled scanner so syntax errors can point at an exact offset.
class Scanner {
 public:
  explicit Scanner(std::string_view text) : text_(text) {}

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool at_end() {
    skip_ws();
    return pos_ >= text_.size();
  }

  std::size_t pos() const { return pos_; }
  char peek() const { return text_[pos_]; }

  std::string_view identifier() {
    skip_ws();
    std::size_t start = pos_;
    if (pos_ >= text_.size() || (!std::isalpha(static_cast<unsigned char>(text_[pos_])) &&
                                 text_[pos_] != '_'))
      throw PredicateSyntaxError("expected factor name", pos_);
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                                   text_[pos_] == '_'))
      ++pos_;
    return text_.substr(start, pos_ - start);
  }

  // A value token runs until whitespace or a structural character.
  std::string_view value_token() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c)) || c == ',' || c == '{' || c == '}' ||
          c == '=' || c == '!')
        break;
      ++pos_;
    }
    if (pos_ == start) throw PredicateSyntaxError("expected value", start);
    return text_.substr(start, pos_ - start);
  }

  void expect(char c, const char* what) {
    skip_ws();
    if (pos_ >= text_.size() || text_[pos_] != c)
      throw PredicateSyntaxError(std::string("expected '") + c + "' in " + what, pos_);
    ++pos_;
  }

  bool consume(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

Predicate Predicate::parse(std::string_view text) {
  Predicate pred;
  Scanner s(text);
  if (s.at_end()) return pred;

  for (;;) {
    Clause clause;
    clause.factor = std::string(s.identifier());
    s.skip_ws();
    if (s.consume('=')) {
      clause.op = Op::eq;
      clause.values.push_back(Value::infer(s.value_token()));
    } else if (s.consume('!')) {
      s.expect('=', "'!=' operator");
      clause.op = Op::ne;
      clause.values.push_back(Value::infer(s.value_token()));
    } else {
      std::size_t kw_pos = s.pos();
      std::string_view kw = s.identifier();
      if (kw != "in") throw PredicateSyntaxError("expected '=', '!=' or 'in'", kw_pos);
      clause.op = Op::in;
      s.expect('{', "value set");
      do {
        clause.values.push_back(Value::infer(s.value_token()));
      } while (s.consume(','));
      s.expect('}', "value set");
    }
    pred.clauses_.push_back(std::move(clause));

    if (s.at_end()) break;
    std::size_t and_pos = s.pos();
    if (s.identifier() != "and")
      throw PredicateSyntaxError("expected 'and' between clauses", and_pos);
  }
  return pred;
}

bool Predicate::matches(const RunPoint& point) const {
  for (const Clause& clause : clauses_) {
    const Value* actual = point.value_of(clause.factor);
    if (!actual) throw UnknownFactorError(clause.factor);
    std::string canon = actual->canonical();
    bool any = false;
    for (const Value& v : clause.values)
      if (v.canonical() == canon) {
        any = true;
        break;
      }
    bool ok = clause.op == Op::ne ? !any : any;
    if (!ok) return false;
  }
  return true;
}

void Predicate::validate(const FactorSpace& space) const {
  for (const Clause& clause : clauses_)
    if (!space.find(clause.factor)) throw UnknownFactorError(clause.factor);
}

std::vector<RunPoint> select(const std::vector<RunPoint>& points, const Predicate& pred) {
  std::vector<RunPoint> out;
  for (const RunPoint& p : points)
    if (pred.matches(p)) out.push_back(p);
  return out;
}

}  // namespace simcamp
