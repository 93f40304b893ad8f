#include "cardio/swrl.hpp"

#include <cctype>
#include <map>
#include <optional>
#include <sstream>
#include <vector>

#include "cardio/error.hpp"
#include "cardio/text.hpp"

namespace cardio {

namespace {

constexpr std::string_view kClassAtom = "Patient";
constexpr std::string_view kDefaultKey = "default:";
constexpr std::string_view kSourceKey = "source:";

std::string_view builtin_name(Comparator c) {
  switch (c) {
    case Comparator::eq: return "equal";
    case Comparator::le: return "lessThanOrEqual";
    case Comparator::gt: return "greaterThan";
  }
  return "";
}

std::optional<Comparator> comparator_from_builtin(std::string_view s) {
  if (s == "equal") return Comparator::eq;
  if (s == "lessThanOrEqual") return Comparator::le;
  if (s == "greaterThan") return Comparator::gt;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Lexer

enum class Tok { ident, var, literal, caret, datatype_marker, lparen, rparen, comma, arrow, end };

struct Token {
  Tok kind;
  std::string text;
  std::size_t line;
  std::size_t column;
};

bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == ':';
}

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  // `#` comment lines seen so far, without the leading '#'.
  const std::vector<std::string>& comments() const { return comments_; }

  Token next() {
    skip_space();
    const std::size_t line = line_, col = col_;
    if (pos_ >= src_.size()) return {Tok::end, "", line, col};
    const char c = src_[pos_];
    if (c == '(') return single(Tok::lparen);
    if (c == ')') return single(Tok::rparen);
    if (c == ',') return single(Tok::comma);
    if (c == '^') {
      if (peek(1) == '^') {
        advance();
        advance();
        return {Tok::datatype_marker, "^^", line, col};
      }
      return single(Tok::caret);
    }
    if (c == '-' && peek(1) == '>') {
      advance();
      advance();
      return {Tok::arrow, "->", line, col};
    }
    if (src_.substr(pos_, 3) == "\xE2\x86\x92") {  // U+2192
      pos_ += 3;
      ++col_;
      return {Tok::arrow, "\xE2\x86\x92", line, col};
    }
    if (c == '\'' || c == '"') {
      advance();
      std::string body;
      while (pos_ < src_.size() && src_[pos_] != c) {
        if (src_[pos_] == '\n') throw ParseError(line, col, "unterminated literal");
        body += src_[pos_];
        advance();
      }
      if (pos_ >= src_.size()) throw ParseError(line, col, "unterminated literal");
      advance();
      return {Tok::literal, body, line, col};
    }
    if (c == '?') {
      advance();
      auto word = identifier();
      if (word.empty()) throw ParseError(line, col, "expected a variable name after '?'");
      return {Tok::var, word, line, col};
    }
    if (ident_char(c)) return {Tok::ident, identifier(), line, col};
    throw ParseError(line, col, std::string("unexpected character '") + c + "'");
  }

 private:
  char peek(std::size_t ahead) const {
    return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
  }

  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else if ((static_cast<unsigned char>(src_[pos_]) & 0xC0) != 0x80) {
      ++col_;
    }
    ++pos_;
  }

  Token single(Tok kind) {
    Token t{kind, std::string(1, src_[pos_]), line_, col_};
    advance();
    return t;
  }

  void skip_space() {
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (c == '#' && at_line_start()) {
        std::size_t end = src_.find('\n', pos_);
        if (end == std::string_view::npos) end = src_.size();
        comments_.emplace_back(src_.substr(pos_ + 1, end - pos_ - 1));
        while (pos_ < end) advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  bool at_line_start() const {
    for (std::size_t i = pos_; i > 0; --i) {
      char p = src_[i - 1];
      if (p == '\n') return true;
      if (p != ' ' && p != '\t' && p != '\r') return false;
    }
    return true;
  }

  // Identifier characters; "-" + line break inside a word joins the halves.
  std::string identifier() {
    std::string word;
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (ident_char(c)) {
        word += c;
        advance();
        continue;
      }
      if (c == '-' && !word.empty() && continuation_follows()) {
        advance();  // '-'
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_])))
          advance();
        continue;
      }
      break;
    }
    return word;
  }

  // After a '-': optional spaces, a line break, optional spaces, identifier char.
  bool continuation_follows() const {
    std::size_t i = pos_ + 1;
    while (i < src_.size() && (src_[i] == ' ' || src_[i] == '\t' || src_[i] == '\r')) ++i;
    if (i >= src_.size() || src_[i] != '\n') return false;
    ++i;
    while (i < src_.size() && (src_[i] == ' ' || src_[i] == '\t' || src_[i] == '\r')) ++i;
    return i < src_.size() && ident_char(src_[i]);
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
  std::vector<std::string> comments_;
};

// ---------------------------------------------------------------------------
// Parser

class Parser {
 public:
  explicit Parser(std::string_view src) : lexer_(src) { shift(); }

  RuleSet document() {
    RuleSet out;
    while (tok_.kind != Tok::end) out.rules.push_back(rule());
    for (const auto& raw : lexer_.comments()) {
      auto line = text::trim(raw);
      if (line.starts_with(kDefaultKey)) {
        auto value = text::trim(line.substr(kDefaultKey.size()));
        auto d = diagnosis_from_name(value);
        if (!d) throw Error("SWRL header: unknown default class '" + std::string(value) + "'");
        out.default_class = *d;
      } else if (line.starts_with(kSourceKey)) {
        out.source = std::string(text::trim(line.substr(kSourceKey.size())));
      }
    }
    return out;
  }

 private:
  void shift() { tok_ = lexer_.next(); }

  [[noreturn]] void fail(const Token& at, const std::string& what) const {
    throw ParseError(at.line, at.column, what);
  }

  Token expect(Tok kind, std::string_view what) {
    if (tok_.kind != kind) {
      fail(tok_, "expected " + std::string(what) + ", found " +
                     (tok_.kind == Tok::end ? std::string("end of input") : "'" + tok_.text + "'"));
    }
    Token t = tok_;
    shift();
    return t;
  }

  SwrlRule rule() {
    SwrlRule r;
    auto cls = expect(Tok::ident, "'Patient'");
    if (cls.text != kClassAtom) fail(cls, "a rule must start with Patient(?var), found '" + cls.text + "'");
    expect(Tok::lparen, "'('");
    r.variable = expect(Tok::var, "a variable").text;
    expect(Tok::rparen, "')'");

    // variable -> attribute bound by a property atom
    std::map<std::string, Attribute> bound;
    while (tok_.kind == Tok::caret) {
      shift();
      atom(r, bound);
    }
    expect(Tok::arrow, "'->' or '^'");
    auto head = expect(Tok::ident, "'presence' or 'absence'");
    auto d = diagnosis_from_name(head.text);
    if (!d) fail(head, "unknown consequent class '" + head.text + "'");
    r.consequent = *d;
    if (tok_.kind == Tok::lparen) {
      shift();
      auto v = expect(Tok::var, "a variable");
      if (v.text != r.variable)
        fail(v, "consequent variable ?" + v.text + " does not match ?" + r.variable);
      expect(Tok::rparen, "')'");
    }
    return r;
  }

  void atom(SwrlRule& r, std::map<std::string, Attribute>& bound) {
    auto head = expect(Tok::ident, "an atom");
    expect(Tok::lparen, "'('");
    if (head.text.starts_with("swrlb:")) {
      auto builtin = head.text.substr(6);
      auto cmp = comparator_from_builtin(builtin);
      if (!cmp) fail(head, "unsupported builtin 'swrlb:" + builtin + "'");
      auto v = expect(Tok::var, "a variable");
      auto it = bound.find(v.text);
      if (it == bound.end()) fail(v, "variable ?" + v.text + " is not bound by a property atom");
      expect(Tok::comma, "','");
      auto lit = expect(Tok::literal, "a quoted literal");
      expect(Tok::datatype_marker, "'^^'");
      auto type = expect(Tok::ident, "a datatype");
      if (type.text != "xsd:decimal") fail(type, "literal type must be xsd:decimal, found " + type.text);
      auto value = text::parse_decimal(text::trim(lit.text));
      if (!value) fail(lit, "'" + lit.text + "' is not a decimal literal");
      expect(Tok::rparen, "')'");
      if (*cmp == Comparator::eq && kind(it->second) == AttributeKind::numeric)
        fail(head, "swrlb:equal is only allowed on categorical or binary properties");
      r.antecedent.push_back({it->second, *cmp, *value});
      return;
    }
    if (head.text.find(':') != std::string::npos && !head.text.starts_with(":"))
      fail(head, "unknown builtin or prefixed name '" + head.text + "'");
    std::string prop = head.text.starts_with(":") ? head.text.substr(1) : head.text;
    auto attr = attribute_from_name(prop);
    if (!attr) {
      if (prop == kTargetName) fail(head, "rules may not read the target property 'cardio'");
      fail(head, "unknown property '" + prop + "'");
    }
    auto subject = expect(Tok::var, "a variable");
    if (subject.text != r.variable)
      fail(subject, "property subject ?" + subject.text + " does not match ?" + r.variable);
    expect(Tok::comma, "','");
    auto object = expect(Tok::var, "a variable");
    expect(Tok::rparen, "')'");
    bound[object.text] = *attr;
  }

  Lexer lexer_;
  Token tok_{Tok::end, "", 1, 1};
};

}  // namespace

std::string serialize_swrl(const RuleSet& rules) {
  std::ostringstream os;
  os << "# cardio-onto SWRL rules\n";
  os << "# " << kDefaultKey << ' ' << name(rules.default_class) << '\n';
  if (!rules.source.empty()) os << "# " << kSourceKey << ' ' << rules.source << '\n';
  for (const auto& rule : rules.rules) {
    os << kClassAtom << "(?" << rule.variable << ')';
    std::size_t n = 0;
    for (const auto& a : rule.antecedent) {
      const std::string var = "V" + std::to_string(++n);
      os << " ^ " << name(a.attribute) << "(?" << rule.variable << ", ?" << var << ')'
         << " ^ swrlb:" << builtin_name(a.comparator) << "(?" << var << ", '"
         << text::decimal(a.value) << "'^^xsd:decimal)";
    }
    os << " -> " << name(rule.consequent) << "(?" << rule.variable << ")\n";
  }
  return os.str();
}

RuleSet parse_swrl(std::string_view text) { return Parser(text).document(); }

}  // namespace cardio
