#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "aerolex/cola.hpp"

namespace aerolex::cola {

namespace {

std::string describe(SourceLocation where, const std::string& message,
                     const std::vector<std::string>& expected) {
  std::ostringstream os;
  os << "line " << where.line << ", column " << where.column << ": " << message;
  if (!expected.empty()) {
    os << " (expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (i) os << (i + 1 == expected.size() ? " or " : ", ");
      os << expected[i];
    }
    os << ")";
  }
  return os.str();
}

}  // namespace

ParseError::ParseError(SourceLocation where, std::string message,
                       std::vector<std::string> expected)
    : InputError(describe(where, message, expected)),
      where_(where),
      expected_(std::move(expected)) {}

namespace {

enum class Tok {
  ident,
  number,
  string,
  lparen,
  rparen,
  lbrace,
  rbrace,
  comma,
  period,
  tilde,
  less,
  greater,
  less_equal,
  greater_equal,
  end,
};

struct Token {
  Tok kind = Tok::end;
  std::string text;
  double number = 0.0;
  SourceLocation where{};
};

std::string token_name(Tok t) {
  switch (t) {
    case Tok::ident: return "identifier";
    case Tok::number: return "number";
    case Tok::string: return "string";
    case Tok::lparen: return "'('";
    case Tok::rparen: return "')'";
    case Tok::lbrace: return "'{'";
    case Tok::rbrace: return "'}'";
    case Tok::comma: return "','";
    case Tok::period: return "'.'";
    case Tok::tilde: return "'~'";
    case Tok::less: return "'<'";
    case Tok::greater: return "'>'";
    case Tok::less_equal: return "'<='";
    case Tok::greater_equal: return "'>='";
    case Tok::end: return "end of input";
  }
  return "?";
}

std::string describe(const Token& t) {
  switch (t.kind) {
    case Tok::ident: return "'" + t.text + "'";
    case Tok::number: return "number " + t.text;
    case Tok::string: return "string \"" + t.text + "\"";
    default: return token_name(t.kind);
  }
}

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space_and_comments();
      Token t;
      t.where = here();
      if (pos_ >= src_.size()) {
        t.kind = Tok::end;
        out.push_back(t);
        return out;
      }
      const char c = src_[pos_];
      if (c >= 'a' && c <= 'z') {
        const std::size_t start = pos_;
        while (pos_ < src_.size() && is_ident_char(src_[pos_])) advance();
        t.kind = Tok::ident;
        t.text = std::string(src_.substr(start, pos_ - start));
      } else if (std::isdigit(static_cast<unsigned char>(c)) ||
                 ((c == '-' || c == '+') && pos_ + 1 < src_.size() &&
                  std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
        lex_number(t);
      } else if (c == '"') {
        lex_string(t);
      } else {
        advance();
        switch (c) {
          case '(': t.kind = Tok::lparen; break;
          case ')': t.kind = Tok::rparen; break;
          case '{': t.kind = Tok::lbrace; break;
          case '}': t.kind = Tok::rbrace; break;
          case ',': t.kind = Tok::comma; break;
          case '.': t.kind = Tok::period; break;
          case '~': t.kind = Tok::tilde; break;
          case '<':
            t.kind = Tok::less;
            if (peek('=')) t.kind = Tok::less_equal;
            break;
          case '>':
            t.kind = Tok::greater;
            if (peek('=')) t.kind = Tok::greater_equal;
            break;
          default: {
            std::string msg = "unexpected character '";
            msg += c;
            msg += "'";
            if (c >= 'A' && c <= 'Z') msg += "; identifiers are lowercase";
            throw ParseError(t.where, msg);
          }
        }
      }
      out.push_back(std::move(t));
    }
  }

 private:
  static bool is_ident_char(char c) {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
  }

  SourceLocation here() const { return {line_, column_}; }

  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  bool peek(char c) {
    if (pos_ < src_.size() && src_[pos_] == c) {
      advance();
      return true;
    }
    return false;
  }

  void skip_space_and_comments() {
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        return;
      }
    }
  }

  bool digit_at(std::size_t i) const {
    return i < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i]));
  }

  void lex_number(Token& t) {
    const std::size_t start = pos_;
    if (src_[pos_] == '-' || src_[pos_] == '+') advance();
    while (digit_at(pos_)) advance();
    // A period only continues the number when a digit follows; otherwise it
    // terminates the statement ("x < 5.").
    if (pos_ < src_.size() && src_[pos_] == '.' && digit_at(pos_ + 1)) {
      advance();
      while (digit_at(pos_)) advance();
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t look = pos_ + 1;
      if (look < src_.size() && (src_[look] == '-' || src_[look] == '+')) ++look;
      if (digit_at(look)) {
        while (pos_ < look) advance();
        while (digit_at(pos_)) advance();
      }
    }
    t.kind = Tok::number;
    t.text = std::string(src_.substr(start, pos_ - start));
    const char* first = t.text.data();
    if (*first == '+') ++first;
    const auto res = std::from_chars(first, t.text.data() + t.text.size(), t.number);
    if (res.ec != std::errc()) throw ParseError(t.where, "malformed number '" + t.text + "'");
  }

  void lex_string(Token& t) {
    advance();  // opening quote
    std::string value;
    while (pos_ < src_.size() && src_[pos_] != '"') {
      if (src_[pos_] == '\n') throw ParseError(t.where, "unterminated string");
      if (src_[pos_] == '\\' && pos_ + 1 < src_.size()) advance();
      value += src_[pos_];
      advance();
    }
    if (pos_ >= src_.size()) throw ParseError(t.where, "unterminated string");
    advance();
    t.kind = Tok::string;
    t.text = std::move(value);
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
};

const std::set<std::string, std::less<>> kKeywords = {
    "star_map", "parameter", "field", "path",     "objective", "if",
    "and",      "or",        "not",   "over",     "distance",  "altitude",
};

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  Constitution run() {
    if (at(Tok::end)) throw ParseError(cur().where, "empty program", {"a statement"});
    while (!at(Tok::end)) statement();
    check_duplicates();
    return std::move(out_);
  }

 private:
  const Token& cur() const { return toks_[pos_]; }
  const Token& ahead(std::size_t n) const {
    return toks_[std::min(pos_ + n, toks_.size() - 1)];
  }
  bool at(Tok k) const { return cur().kind == k; }
  bool at_word(std::string_view w) const { return at(Tok::ident) && cur().text == w; }

  [[noreturn]] void fail(std::vector<std::string> expected) const {
    throw ParseError(cur().where, "unexpected " + describe(cur()), std::move(expected));
  }

  Token expect(Tok k) {
    if (!at(k)) fail({token_name(k)});
    return toks_[pos_++];
  }

  void expect_word(std::string_view w) {
    if (!at_word(w)) fail({"'" + std::string(w) + "'"});
    ++pos_;
  }

  Token expect_name() {
    if (!at(Tok::ident)) fail({"identifier"});
    if (kKeywords.count(cur().text)) {
      throw ParseError(cur().where, "keyword '" + cur().text + "' cannot be used as a name");
    }
    return toks_[pos_++];
  }

  void statement() {
    if (at_word("star_map")) {
      star_map();
    } else if (at_word("parameter")) {
      parameter_group();
    } else if (at_word("field") && ahead(1).kind == Tok::ident && ahead(1).text == "objective") {
      ++pos_;
      objective(ObjectiveScope::field);
    } else if (at_word("path")) {
      ++pos_;
      if (!at_word("objective")) fail({"'objective'"});
      objective(ObjectiveScope::path);
    } else if (at_word("field")) {
      ++pos_;
      rule(true);
    } else if (at(Tok::ident) && ahead(1).kind == Tok::tilde) {
      continuous_fact();
    } else if (at(Tok::ident) && !kKeywords.count(cur().text)) {
      rule(false);
    } else {
      fail({"'star_map'", "'parameter'", "'field'", "'path'", "identifier"});
    }
  }

  void star_map() {
    const auto where = cur().where;
    ++pos_;
    expect(Tok::lparen);
    const Token ref = expect(Tok::string);
    expect(Tok::rparen);
    expect(Tok::period);
    if (!out_.star_map_ref.empty()) throw ParseError(where, "star_map declared twice");
    out_.star_map_ref = ref.text;
  }

  void parameter_group() {
    ParameterGroup g;
    g.where = cur().where;
    ++pos_;
    expect(Tok::lbrace);
    std::set<std::string> seen;
    for (;;) {
      const Token name = expect_name();
      if (!seen.insert(name.text).second) {
        throw ParseError(name.where, "option '" + name.text + "' repeated in its group");
      }
      g.options.push_back(name.text);
      if (at(Tok::comma)) {
        ++pos_;
        continue;
      }
      if (at(Tok::rbrace)) break;
      fail({"','", "'}'"});
    }
    if (g.options.size() < 2) {
      throw ParseError(cur().where, "a parameter group needs at least two options", {"','"});
    }
    ++pos_;
    expect(Tok::period);
    out_.parameter_groups.push_back(std::move(g));
  }

  void continuous_fact() {
    ContinuousFact f;
    const Token name = expect_name();
    f.name = name.text;
    f.where = name.where;
    expect(Tok::tilde);
    const Token dist = expect(Tok::ident);
    f.distribution = dist.text;
    expect(Tok::lparen);
    f.params.push_back(expect(Tok::number).number);
    while (at(Tok::comma)) {
      ++pos_;
      f.params.push_back(expect(Tok::number).number);
    }
    expect(Tok::rparen);
    expect(Tok::period);
    if (f.distribution != "normal") {
      throw ParseError(dist.where, "unsupported distribution '" + f.distribution +
                                       "'; only normal(mean, std) is available in this version");
    }
    if (f.params.size() != 2) {
      throw ParseError(dist.where, "normal takes exactly two arguments (mean, std)");
    }
    if (!(f.params[1] > 0.0)) {
      throw ParseError(dist.where, "normal standard deviation must be positive");
    }
    out_.continuous_facts.push_back(std::move(f));
  }

  void rule(bool is_field) {
    Rule r;
    const Token head = expect_name();
    r.head = head.text;
    r.is_field = is_field;
    r.where = head.where;
    expect_word("if");
    r.body = body();
    end_statement();
    out_.rules.push_back(std::move(r));
  }

  void objective(ObjectiveScope scope) {
    ObjectiveDecl o;
    o.where = cur().where;
    expect_word("objective");
    o.scope = scope;
    o.name = expect_name().text;
    if (at_word("if")) {
      ++pos_;
      o.source = ObjectiveSource::logic;
      o.body = body();
    } else if (at(Tok::lparen)) {
      ++pos_;
      o.source = ObjectiveSource::model;
      o.model_ref = expect(Tok::string).text;
      expect(Tok::rparen);
    } else if (!at(Tok::period)) {
      fail({"'if'", "'('", "'.'"});
    }
    expect(Tok::period);
    out_.objectives.push_back(std::move(o));
  }

  void end_statement() {
    if (at(Tok::period)) {
      ++pos_;
      return;
    }
    fail({"'.'", "'and'", "'or'"});
  }

  Body body() { return disjunction(); }

  Body disjunction() {
    const auto where = cur().where;
    std::vector<Body> parts{conjunction()};
    while (at_word("or")) {
      ++pos_;
      parts.push_back(conjunction());
    }
    return parts.size() == 1 ? parts.front() : BodyExpr::make_or(std::move(parts), where);
  }

  Body conjunction() {
    const auto where = cur().where;
    std::vector<Body> parts{unary()};
    while (at_word("and")) {
      ++pos_;
      parts.push_back(unary());
    }
    return parts.size() == 1 ? parts.front() : BodyExpr::make_and(std::move(parts), where);
  }

  Body unary() {
    if (at_word("not")) {
      const auto where = cur().where;
      ++pos_;
      return BodyExpr::make_not(unary(), where);
    }
    return primary();
  }

  static bool is_compare(Tok k) {
    return k == Tok::less || k == Tok::greater || k == Tok::less_equal ||
           k == Tok::greater_equal;
  }

  static CompareOp to_op(Tok k) {
    switch (k) {
      case Tok::less: return CompareOp::less;
      case Tok::greater: return CompareOp::greater;
      case Tok::less_equal: return CompareOp::less_equal;
      default: return CompareOp::greater_equal;
    }
  }

  static CompareOp flip(CompareOp op) {
    switch (op) {
      case CompareOp::less: return CompareOp::greater;
      case CompareOp::greater: return CompareOp::less;
      case CompareOp::less_equal: return CompareOp::greater_equal;
      case CompareOp::greater_equal: return CompareOp::less_equal;
    }
    return op;
  }

  // cterm := 'distance' '(' IDENT ')' | 'altitude' | IDENT
  ContinuousTerm continuous_term() {
    if (at_word("distance")) {
      ++pos_;
      expect(Tok::lparen);
      const Token tag = expect_name();
      expect(Tok::rparen);
      return {TermKind::distance, tag.text};
    }
    if (at_word("altitude")) {
      ++pos_;
      return {TermKind::altitude, ""};
    }
    return {TermKind::fact, expect_name().text};
  }

  Body comparison_rest(ContinuousTerm term, SourceLocation where) {
    if (!is_compare(cur().kind)) fail({"'<'", "'>'", "'<='", "'>='"});
    const CompareOp op = to_op(cur().kind);
    ++pos_;
    const double literal = expect(Tok::number).number;
    return BodyExpr::make_comparison(std::move(term), op, literal, where);
  }

  Body primary() {
    const auto where = cur().where;
    if (at(Tok::lparen)) {
      ++pos_;
      Body inner = body();
      expect(Tok::rparen);
      return inner;
    }
    if (at(Tok::number)) {
      // literal op term, normalized to term op' literal
      const double literal = cur().number;
      ++pos_;
      if (!is_compare(cur().kind)) fail({"'<'", "'>'", "'<='", "'>='"});
      const CompareOp op = flip(to_op(cur().kind));
      ++pos_;
      return BodyExpr::make_comparison(continuous_term(), op, literal, where);
    }
    if (at_word("over")) {
      ++pos_;
      expect(Tok::lparen);
      const Token tag = expect_name();
      expect(Tok::rparen);
      return BodyExpr::make_over(tag.text, where);
    }
    if (at_word("distance") || at_word("altitude")) {
      return comparison_rest(continuous_term(), where);
    }
    if (at(Tok::ident) && !kKeywords.count(cur().text)) {
      const Token name = toks_[pos_++];
      if (is_compare(cur().kind)) return comparison_rest({TermKind::fact, name.text}, where);
      return BodyExpr::make_atom(name.text, where);
    }
    fail({"'('", "'not'", "'over'", "'distance'", "'altitude'", "identifier"});
  }

  void check_duplicates() {
    std::map<std::string, SourceLocation> defined;
    auto define = [&](const std::string& name, SourceLocation where) {
      if (!defined.emplace(name, where).second) {
        throw ParseError(where, "'" + name + "' is defined more than once");
      }
    };
    for (const auto& g : out_.parameter_groups) {
      for (const auto& o : g.options) {
        // Options repeated across groups are a validation diagnostic instead.
        defined.emplace(o, g.where);
      }
    }
    for (const auto& f : out_.continuous_facts) define(f.name, f.where);
    for (const auto& r : out_.rules) define(r.head, r.where);
    std::set<std::string> objective_names;
    for (const auto& o : out_.objectives) {
      if (!objective_names.insert(o.name).second) {
        throw ParseError(o.where, "objective '" + o.name + "' is declared more than once");
      }
      if (o.source == ObjectiveSource::logic && o.body) {
        define(o.name, o.where);
      } else if (o.source == ObjectiveSource::model && defined.count(o.name)) {
        throw ParseError(o.where, "'" + o.name + "' is defined more than once");
      }
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  Constitution out_;
};

}  // namespace

Constitution parse(std::string_view source) { return Parser(Lexer(source).run()).run(); }

Constitution parse_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open constitution '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

}  // namespace aerolex::cola
