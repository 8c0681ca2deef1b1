#include "simcamp/result_parser.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <istream>

#include "simcamp/errors.hpp"

namespace simcamp {

namespace {

// Reads the next non-blank, non-comment line. Returns false at EOF.
bool next_content_line(std::istream& in, std::string& line, std::size_t& line_no) {
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::size_t i = 0;
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    if (i == line.size() || line[i] == '#') continue;
    return true;
  }
  return false;
}

// Whitespace-separated tokens; a double-quoted token may contain spaces.
void split_tokens(const std::string& line, std::vector<std::string>& out, std::size_t line_no) {
  out.clear();
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    if (i >= line.size()) break;
    if (line[i] == '"') {
      auto end = line.find('"', i + 1);
      if (end == std::string::npos)
        throw ResultParseError("unterminated quoted string", line_no, line);
      out.emplace_back(line, i + 1, end - i - 1);
      i = end + 1;
    } else {
      std::size_t start = i;
      while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
      out.emplace_back(line, start, i - start);
    }
  }
}

double parse_double(const std::string& token, const std::string& line, std::size_t line_no) {
  double v = 0;
  auto res = std::from_chars(token.data(), token.data() + token.size(), v);
  if (res.ec != std::errc() || res.ptr != token.data() + token.size())
    throw ResultParseError("expected a number, got '" + token + "'", line_no, line);
  return v;
}

long parse_long(const std::string& token, const std::string& line, std::size_t line_no) {
  long v = 0;
  auto res = std::from_chars(token.data(), token.data() + token.size(), v);
  if (res.ec != std::errc() || res.ptr != token.data() + token.size())
    throw ResultParseError("expected an integer, got '" + token + "'", line_no, line);
  return v;
}

void require_tokens(const std::vector<std::string>& tokens, std::size_t n,
                    const std::string& line, std::size_t line_no) {
  if (tokens.size() != n)
    throw ResultParseError("expected " + std::to_string(n) + " fields, got " +
                               std::to_string(tokens.size()),
                           line_no, line);
}

}  // namespace

ScaReader::ScaReader(std::istream& in, ParseMode mode) : in_(in), mode_(mode) {}

std::optional<ScaEvent> ScaReader::next() {
  while (next_content_line(in_, line_, line_no_)) {
    split_tokens(line_, tokens_, line_no_);
    const std::string& directive = tokens_[0];

    if (directive == "version") {
      if (saw_content_)
        throw ResultParseError("'version' is only valid as the first line", line_no_, line_);
      saw_content_ = true;
      require_tokens(tokens_, 2, line_, line_no_);
      parse_long(tokens_[1], line_, line_no_);
      continue;
    }
    saw_content_ = true;

    if (directive == "run") {
      require_tokens(tokens_, 2, line_, line_no_);
      current_run_ = tokens_[1];
      return ScaEvent(ScaRun{tokens_[1]});
    }
    if (directive == "attr") {
      require_tokens(tokens_, 3, line_, line_no_);
      return ScaEvent(ScaAttr{tokens_[1], tokens_[2]});
    }
    if (directive == "itervar") {
      require_tokens(tokens_, 3, line_, line_no_);
      return ScaEvent(ScaItervar{tokens_[1], tokens_[2]});
    }
    if (directive == "param") {
      require_tokens(tokens_, 3, line_, line_no_);
      return ScaEvent(ScaParam{tokens_[1], tokens_[2]});
    }
    if (directive == "scalar") {
      require_tokens(tokens_, 4, line_, line_no_);
      ScalarRecord rec;
      rec.run_id = current_run_;
      rec.module = tokens_[1];
      rec.name = tokens_[2];
      rec.value = parse_double(tokens_[3], line_, line_no_);
      rec.finite = std::isfinite(rec.value);
      return ScaEvent(std::move(rec));
    }

    if (mode_ == ParseMode::strict)
      throw ResultParseError("unknown directive '" + directive + "'", line_no_, line_);
    ++skipped_;
  }
  return std::nullopt;
}

VecReader::VecReader(std::istream& in, ParseMode mode, bool monotone_error)
    : in_(in), mode_(mode), monotone_error_(monotone_error) {}

std::optional<VecEvent> VecReader::next() {
  while (next_content_line(in_, line_, line_no_)) {
    split_tokens(line_, tokens_, line_no_);
    const std::string& first = tokens_[0];

    if (first == "version") {
      if (saw_content_)
        throw ResultParseError("'version' is only valid as the first line", line_no_, line_);
      saw_content_ = true;
      require_tokens(tokens_, 2, line_, line_no_);
      parse_long(tokens_[1], line_, line_no_);
      continue;
    }
    saw_content_ = true;

    if (first == "vector") {
      require_tokens(tokens_, 5, line_, line_no_);
      VectorDecl decl;
      decl.id = parse_long(tokens_[1], line_, line_no_);
      decl.module = tokens_[2];
      decl.name = tokens_[3];
      decl.columns = tokens_[4];
      if (decl.columns != "TV")
        throw ResultParseError("unsupported vector columns '" + decl.columns + "' (expected TV)",
                               line_no_, line_);
      if (!last_time_.emplace(decl.id, -1.0).second)
        throw ResultParseError("duplicate vector id " + std::to_string(decl.id), line_no_, line_);
      return VecEvent(std::move(decl));
    }

    // Sample lines start with the numeric vector id.
    if (!first.empty() && (std::isdigit(static_cast<unsigned char>(first[0])) || first[0] == '-')) {
      require_tokens(tokens_, 3, line_, line_no_);
      VectorSample s;
      s.id = parse_long(tokens_[0], line_, line_no_);
      s.time = parse_double(tokens_[1], line_, line_no_);
      s.value = parse_double(tokens_[2], line_, line_no_);
      auto it = last_time_.find(s.id);
      if (it == last_time_.end())
        throw ResultParseError("sample for undeclared vector id " + std::to_string(s.id),
                               line_no_, line_);
      if (s.time < 0)
        throw ResultParseError("negative sample time", line_no_, line_);
      if (s.time < it->second) {
        if (monotone_error_)
          throw ResultParseError("non-monotone time in vector " + std::to_string(s.id), line_no_,
                                 line_);
        ++warnings_;
      }
      it->second = s.time;
      return VecEvent(s);
    }

    if (mode_ == ParseMode::strict)
      throw ResultParseError("unknown directive '" + first + "'", line_no_, line_);
    ++skipped_;
  }
  return std::nullopt;
}

}  // namespace simcamp
