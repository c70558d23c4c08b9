#pragma once

// Text format for circumstance models (.cm files):
//
//   model       = "model" IDENT { measurement } { circumstance } ;
//   measurement = "measurement" IDENT "{" IDENT { IDENT } "}" ;
//   circumstance= "circumstance" IDENT [ "label" STRING ] "weight" RATIONAL "{" { row } "}" ;
//   row         = IDENT ":" RATIONAL { RATIONAL } ;
//   RATIONAL    = INT [ "/" POSINT ] ;
//
// IDENT is [A-Za-z0-9_][A-Za-z0-9_.-]*. STRING is double-quoted; quote,
// backslash, newline, tab and carriage return are escaped with a backslash.
// "#" starts a comment running to end of line. Row entries follow the
// measurement's outcome order.

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "circ/model.hpp"

namespace circ::dsl {

struct SourceSpan {
  std::size_t line = 1;   // 1-based
  std::size_t column = 1; // 1-based, in bytes
  std::size_t offset = 0; // 0-based byte offset
};

enum class ErrorKind {
  syntax,
  duplicate_id,
  bad_rational,
  row_not_normalized,
  weights_not_normalized,
  missing_table,
  unknown_measurement,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::syntax: return "syntax";
    case ErrorKind::duplicate_id: return "duplicate-id";
    case ErrorKind::bad_rational: return "bad-rational";
    case ErrorKind::row_not_normalized: return "row-not-normalized";
    case ErrorKind::weights_not_normalized: return "weights-not-normalized";
    case ErrorKind::missing_table: return "missing-table";
    case ErrorKind::unknown_measurement: return "unknown-measurement";
  }
  return "unknown";
}

struct ParseError {
  SourceSpan span;
  ErrorKind kind = ErrorKind::syntax;
  std::string message;
};

/// "file:3:14: error[row-not-normalized]: ..."
inline std::string format(const ParseError& e, std::string_view filename = "<input>") {
  return std::string(filename) + ":" + std::to_string(e.span.line) + ":" + std::to_string(e.span.column) +
         ": error[" + std::string(to_string(e.kind)) + "]: " + e.message;
}

struct ParseResult {
  std::optional<CircumstanceModel> model;
  std::vector<ParseError> errors;

  explicit operator bool() const { return model.has_value(); }
};

inline bool is_identifier(std::string_view s) {
  auto head = [](unsigned char c) {
    return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
  };
  if (s.empty() || !head(static_cast<unsigned char>(s.front()))) return false;
  for (unsigned char c : s.substr(1)) {
    if (!head(c) && c != '.' && c != '-') return false;
  }
  return true;
}

namespace detail {

enum class Tok { word, string, lbrace, rbrace, colon, end, bad };

struct Token {
  Tok kind = Tok::end;
  std::string text; // word text, or decoded string contents
  SourceSpan span;
};

class Lexer {
public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    skip_space_and_comments();
    Token t;
    t.span = here();
    if (pos_ >= src_.size()) return t;
    char c = src_[pos_];
    switch (c) {
      case '{': advance(); t.kind = Tok::lbrace; t.text = "{"; return t;
      case '}': advance(); t.kind = Tok::rbrace; t.text = "}"; return t;
      case ':': advance(); t.kind = Tok::colon; t.text = ":"; return t;
      case '"': return string_literal(t);
      default: break;
    }
    t.kind = Tok::word;
    while (pos_ < src_.size() && !is_space(src_[pos_]) && !is_special(src_[pos_])) {
      t.text += src_[pos_];
      advance();
    }
    return t;
  }

private:
  static bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }
  static bool is_special(char c) { return c == '{' || c == '}' || c == ':' || c == '"' || c == '#'; }

  SourceSpan here() const { return {line_, column_, pos_}; }

  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  void skip_space_and_comments() {
    while (pos_ < src_.size()) {
      if (is_space(src_[pos_])) {
        advance();
      } else if (src_[pos_] == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else {
        break;
      }
    }
  }

  Token string_literal(Token t) {
    advance(); // opening quote
    for (;;) {
      if (pos_ >= src_.size() || src_[pos_] == '\n') {
        t.kind = Tok::bad;
        t.text = "unterminated string";
        return t;
      }
      char c = src_[pos_];
      advance();
      if (c == '"') break;
      if (c != '\\') {
        t.text += c;
        continue;
      }
      if (pos_ >= src_.size()) continue; // reported as unterminated next round
      char e = src_[pos_];
      advance();
      switch (e) {
        case '"': t.text += '"'; break;
        case '\\': t.text += '\\'; break;
        case 'n': t.text += '\n'; break;
        case 't': t.text += '\t'; break;
        case 'r': t.text += '\r'; break;
        default:
          t.kind = Tok::bad;
          t.text = std::string("unknown escape '\\") + e + "' in string";
          return t;
      }
    }
    t.kind = Tok::string;
    return t;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
};

struct SyntaxAbort {};

class Parser {
public:
  explicit Parser(std::string_view text) : lexer_(text) {
    cur_ = lexer_.next();
    ahead_ = lexer_.next();
  }

  ParseResult run() {
    CircumstanceModel model;
    try {
      parse_model(model);
    } catch (const SyntaxAbort&) {
      return {std::nullopt, std::move(errors_)};
    } catch (const error& e) {
      errors_.push_back({cur_.span, ErrorKind::syntax, e.what()});
      return {std::nullopt, std::move(errors_)};
    }
    if (errors_.empty()) {
      for (const auto& v : validate_model(model)) {
        errors_.push_back({model_span_, ErrorKind::syntax, v.location + ": " + v.message});
      }
    }
    if (!errors_.empty()) return {std::nullopt, std::move(errors_)};
    return {std::move(model), {}};
  }

private:
  void shift() {
    cur_ = std::move(ahead_);
    ahead_ = lexer_.next();
  }

  static std::string describe(const Token& t) {
    switch (t.kind) {
      case Tok::end: return "end of input";
      case Tok::string: return "string";
      case Tok::bad: return t.text;
      default: return "'" + t.text + "'";
    }
  }

  [[noreturn]] void fail(const std::string& message) {
    errors_.push_back({cur_.span, ErrorKind::syntax, message});
    throw SyntaxAbort{};
  }

  void report(const SourceSpan& span, ErrorKind kind, std::string message) {
    errors_.push_back({span, kind, std::move(message)});
  }

  bool at_keyword(std::string_view kw) const { return cur_.kind == Tok::word && cur_.text == kw; }

  void expect_keyword(std::string_view kw) {
    if (!at_keyword(kw)) fail("expected '" + std::string(kw) + "', found " + describe(cur_));
    shift();
  }

  void expect(Tok kind, std::string_view what) {
    if (cur_.kind != kind) fail("expected " + std::string(what) + ", found " + describe(cur_));
    shift();
  }

  Token identifier(std::string_view what) {
    if (cur_.kind != Tok::word || !is_identifier(cur_.text)) {
      fail("expected " + std::string(what) + " identifier, found " + describe(cur_));
    }
    Token t = cur_;
    shift();
    return t;
  }

  /// Consumes a word that should be a rational; reports and returns nullopt
  /// when it is not a nonnegative rational.
  std::optional<Rational> rational(std::string_view what) {
    if (cur_.kind != Tok::word) fail("expected " + std::string(what) + ", found " + describe(cur_));
    Token t = cur_;
    shift();
    auto r = Rational::parse(t.text);
    if (!r) {
      report(t.span, ErrorKind::bad_rational, "'" + t.text + "' is not a rational (expected p or p/q) in " + std::string(what));
      return std::nullopt;
    }
    if (r->sign() < 0) {
      report(t.span, ErrorKind::bad_rational, "negative " + std::string(what) + " '" + t.text + "'");
      return std::nullopt;
    }
    return r;
  }

  void parse_model(CircumstanceModel& model) {
    expect_keyword("model");
    Token name = identifier("model name");
    model_span_ = name.span;
    model.name = name.text;

    while (at_keyword("measurement")) parse_measurement(model);
    if (model.measurements.empty()) fail("model declares no measurements");

    bool weights_ok = true;
    while (at_keyword("circumstance")) weights_ok &= parse_circumstance(model);
    if (cur_.kind != Tok::end) fail("expected 'measurement', 'circumstance' or end of input, found " + describe(cur_));

    if (weights_ok) {
      Rational total;
      for (const auto& c : model.circumstances) total += c.weight;
      if (total != 1) {
        report(model_span_, ErrorKind::weights_not_normalized,
               "circumstance weights of model '" + model.name + "' sum to " + total.str() + " ≠ 1");
      }
    }
  }

  void parse_measurement(CircumstanceModel& model) {
    if (!model.circumstances.empty()) fail("measurement declared after a circumstance");
    shift();
    Token id = identifier("measurement");
    if (model.measurement_index(id.text)) {
      report(id.span, ErrorKind::duplicate_id, "duplicate measurement id '" + id.text + "'");
    }
    expect(Tok::lbrace, "'{'");
    Measurement m{id.text, {}};
    while (cur_.kind != Tok::rbrace) {
      Token o = identifier("outcome");
      if (m.outcome_index(o.text)) {
        report(o.span, ErrorKind::duplicate_id, "duplicate outcome '" + o.text + "' in measurement '" + id.text + "'");
      }
      m.outcomes.push_back(o.text);
    }
    if (m.outcomes.size() < 2) fail("measurement '" + id.text + "' needs at least 2 outcomes");
    shift();
    model.measurements.push_back(std::move(m));
  }

  /// Returns false when the weight could not be read.
  bool parse_circumstance(CircumstanceModel& model) {
    shift();
    Token id = identifier("circumstance");
    for (const auto& c : model.circumstances) {
      if (c.id == id.text) {
        report(id.span, ErrorKind::duplicate_id, "duplicate circumstance id '" + id.text + "'");
        break;
      }
    }
    Circumstance c{id.text, {}, {}, {}};
    if (at_keyword("label")) {
      shift();
      if (cur_.kind != Tok::string) fail("expected label string, found " + describe(cur_));
      c.label = cur_.text;
      shift();
    }
    expect_keyword("weight");
    auto weight = rational("weight");
    if (weight) c.weight = *weight;
    expect(Tok::lbrace, "'{'");
    std::set<std::string, std::less<>> rows; // includes rejected rows, so they are not also reported missing
    while (cur_.kind != Tok::rbrace) parse_row(model, c, rows);
    shift();
    for (const auto& m : model.measurements) {
      if (!rows.contains(m.id)) {
        report(id.span, ErrorKind::missing_table,
               "circumstance '" + c.id + "' has no row for measurement '" + m.id + "'");
      }
    }
    model.circumstances.push_back(std::move(c));
    return weight.has_value();
  }

  void parse_row(const CircumstanceModel& model, Circumstance& c, std::set<std::string, std::less<>>& rows) {
    Token mid = identifier("measurement");
    expect(Tok::colon, "':'");
    std::vector<Rational> entries;
    bool entries_ok = true;
    SourceSpan first = cur_.span;
    // entries run until '}' or the next "IDENT :" row header
    while (cur_.kind == Tok::word && ahead_.kind != Tok::colon) {
      auto r = rational("probability");
      if (r) entries.push_back(std::move(*r));
      else entries_ok = false;
    }
    if (entries.empty() && entries_ok) fail("row '" + mid.text + "' has no entries");

    auto k = model.measurement_index(mid.text);
    if (!k) {
      report(mid.span, ErrorKind::unknown_measurement, "row for unknown measurement '" + mid.text + "'");
      return;
    }
    if (!rows.insert(mid.text).second) {
      report(mid.span, ErrorKind::duplicate_id, "second row for measurement '" + mid.text + "' in circumstance '" + c.id + "'");
      return;
    }
    if (!entries_ok) return;
    const Measurement& m = model.measurements[*k];
    if (entries.size() != m.outcomes.size()) {
      report(first, ErrorKind::syntax,
             "row '" + mid.text + "' has " + std::to_string(entries.size()) + " entries, measurement has " +
                 std::to_string(m.outcomes.size()) + " outcomes");
      return;
    }
    ProbVector row(std::move(entries));
    if (Rational s = row.sum(); s != 1) {
      report(first, ErrorKind::row_not_normalized,
             "row '" + mid.text + "' of circumstance '" + c.id + "' sums to " + s.str() + " ≠ 1");
      return;
    }
    c.tables.emplace(mid.text, std::move(row));
  }

  Lexer lexer_;
  Token cur_;
  Token ahead_;
  SourceSpan model_span_;
  std::vector<ParseError> errors_;
};

inline std::string quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default: out += c;
    }
  }
  return out + "\"";
}

} // namespace detail

/// Parses a .cm document. Never throws on malformed input: failures come
/// back as a nonempty error list, and a returned model always validates.
inline ParseResult parse(std::string_view text) { return detail::Parser(text).run(); }

/// Canonical text of a valid model; parse(serialize(m)) == m.
inline std::string serialize(const CircumstanceModel& model) {
  require_valid(model);
  auto ident = [](const std::string& s, std::string_view what) -> const std::string& {
    if (!is_identifier(s)) throw input_error(std::string(what) + " '" + s + "' is not a valid identifier");
    return s;
  };
  std::string out = "model " + ident(model.name, "model name") + "\n\n";
  for (const auto& m : model.measurements) {
    out += "measurement " + ident(m.id, "measurement id") + " {";
    for (const auto& o : m.outcomes) out += " " + ident(o, "outcome id");
    out += " }\n";
  }
  for (const auto& c : model.circumstances) {
    out += "\ncircumstance " + ident(c.id, "circumstance id");
    if (!c.label.empty()) out += " label " + detail::quote(c.label);
    out += " weight " + c.weight.str() + " {\n";
    for (const auto& m : model.measurements) {
      out += "  " + m.id + ":";
      for (const auto& e : c.table(m.id).entries) out += " " + e.str();
      out += "\n";
    }
    out += "}\n";
  }
  return out;
}

} // namespace circ::dsl
