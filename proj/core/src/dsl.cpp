#include "gabac/dsl.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace gabac {
namespace {

// Lexer --------------------------------------------------------------------

enum class Tok {
  End,
  Ident,
  String,
  Integer,
  Decimal,
  Colon,
  Comma,
  LBrace,
  RBrace,
  Equals,
  Semicolon,
  LParen,
  RParen,
  EdgeOpen,   // -[
  EdgeClose,  // ]->
  Invalid,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;  // identifier, unescaped string, number spelling, or error message
  SourcePos pos;
};

constexpr std::array<std::string_view, 14> kKeywords{
    "node",  "edge",   "policy", "permit", "deny", "score", "subject",
    "action", "object", "not",   "and",    "or",   "true",  "false"};

bool is_keyword(std::string_view word) {
  return std::find(kKeywords.begin(), kKeywords.end(), word) != kKeywords.end();
}

bool ident_start(char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_'; }
bool ident_char(char c) { return ident_start(c) || (c >= '0' && c <= '9'); }
bool digit(char c) { return c >= '0' && c <= '9'; }

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {
    if (text_.substr(0, 3) == "\xEF\xBB\xBF") i_ = 3;
  }

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      Token tok = next();
      const bool done = tok.kind == Tok::End;
      out.push_back(std::move(tok));
      if (done) break;
    }
    return out;
  }

 private:
  char peek(std::size_t ahead = 0) const {
    return i_ + ahead < text_.size() ? text_[i_ + ahead] : '\0';
  }

  void advance() {
    if (text_[i_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++i_;
  }

  void skip_space() {
    while (i_ < text_.size()) {
      char c = text_[i_];
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v') {
        advance();
      } else if (c == '#') {
        while (i_ < text_.size() && text_[i_] != '\n') advance();
      } else {
        break;
      }
    }
  }

  Token make(Tok kind, std::string text, SourcePos pos) { return Token{kind, std::move(text), pos}; }

  Token next() {
    SourcePos pos{line_, col_};
    if (i_ >= text_.size()) return make(Tok::End, "", pos);
    const char c = text_[i_];

    if (ident_start(c)) {
      std::size_t start = i_;
      while (i_ < text_.size() && ident_char(text_[i_])) advance();
      return make(Tok::Ident, std::string(text_.substr(start, i_ - start)), pos);
    }
    if (c == '"') return lex_string(pos);
    if (digit(c) || (c == '-' && digit(peek(1)))) return lex_number(pos);
    if (c == '-' && peek(1) == '[') {
      advance();
      advance();
      return make(Tok::EdgeOpen, "-[", pos);
    }
    if (c == ']' && peek(1) == '-' && peek(2) == '>') {
      advance();
      advance();
      advance();
      return make(Tok::EdgeClose, "]->", pos);
    }
    Tok kind = Tok::Invalid;
    switch (c) {
      case ':': kind = Tok::Colon; break;
      case ',': kind = Tok::Comma; break;
      case '{': kind = Tok::LBrace; break;
      case '}': kind = Tok::RBrace; break;
      case '=': kind = Tok::Equals; break;
      case ';': kind = Tok::Semicolon; break;
      case '(': kind = Tok::LParen; break;
      case ')': kind = Tok::RParen; break;
      default: break;
    }
    advance();
    if (kind == Tok::Invalid) {
      std::string shown = (static_cast<unsigned char>(c) < 0x20 || static_cast<unsigned char>(c) >= 0x7f)
                              ? "byte 0x" + to_hex(static_cast<unsigned char>(c))
                              : "'" + std::string(1, c) + "'";
      return make(Tok::Invalid, "unexpected character " + shown, pos);
    }
    return make(kind, std::string(1, c), pos);
  }

  static std::string to_hex(unsigned char c) {
    static constexpr char kDigits[] = "0123456789abcdef";
    return {kDigits[c >> 4], kDigits[c & 0xf]};
  }

  Token lex_string(SourcePos pos) {
    advance();  // opening quote
    std::string value;
    while (i_ < text_.size()) {
      char c = text_[i_];
      if (c == '"') {
        advance();
        return make(Tok::String, std::move(value), pos);
      }
      if (c == '\n') break;
      if (c == '\\') {
        advance();
        if (i_ >= text_.size()) break;
        char e = text_[i_];
        switch (e) {
          case '"': value += '"'; break;
          case '\\': value += '\\'; break;
          case 'n': value += '\n'; break;
          case 't': value += '\t'; break;
          default:
            advance();
            return make(Tok::Invalid, std::string("unknown escape '\\") + e + "' in string", pos);
        }
        advance();
        continue;
      }
      value += c;
      advance();
    }
    return make(Tok::Invalid, "unterminated string", pos);
  }

  Token lex_number(SourcePos pos) {
    std::size_t start = i_;
    bool decimal = false;
    if (text_[i_] == '-') advance();
    while (digit(peek())) advance();
    if (peek() == '.' && digit(peek(1))) {
      decimal = true;
      advance();
      while (digit(peek())) advance();
    }
    if ((peek() == 'e' || peek() == 'E') &&
        (digit(peek(1)) || ((peek(1) == '+' || peek(1) == '-') && digit(peek(2))))) {
      decimal = true;
      advance();
      if (peek() == '+' || peek() == '-') advance();
      while (digit(peek())) advance();
    }
    if (ident_char(peek()))
      return make(Tok::Invalid, "malformed number", pos);
    return make(decimal ? Tok::Decimal : Tok::Integer, std::string(text_.substr(start, i_ - start)),
                pos);
  }

  std::string_view text_;
  std::size_t i_ = 0;
  int line_ = 1;
  int col_ = 1;
};

// Parser -------------------------------------------------------------------

struct ParseFailure {
  Diagnostic diagnostic;
};

constexpr int kMaxExprNesting = 200;

std::string describe(const Token& tok) {
  switch (tok.kind) {
    case Tok::End: return "end of input";
    case Tok::Ident: return "'" + tok.text + "'";
    case Tok::String: return "string \"" + tok.text + "\"";
    case Tok::Integer:
    case Tok::Decimal: return "number " + tok.text;
    case Tok::Invalid: return tok.text;
    default: return "'" + tok.text + "'";
  }
}

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  ParseResult run() {
    ParseResult result;
    while (peek().kind != Tok::End) {
      const std::size_t start = i_;
      try {
        statement(result.document);
      } catch (const ParseFailure& failure) {
        result.errors.push_back(failure.diagnostic);
        recover(start);
      }
    }
    return result;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(i_ + ahead, toks_.size() - 1)];
  }
  const Token& take() {
    const Token& t = toks_[i_];
    if (i_ + 1 < toks_.size()) ++i_;
    return t;
  }
  bool at_keyword(std::string_view word) const {
    return peek().kind == Tok::Ident && peek().text == word;
  }
  bool at_statement_start() const {
    return at_keyword("node") || at_keyword("edge") || at_keyword("policy");
  }

  [[noreturn]] void fail(const Token& at, const std::string& message,
                         Errc code = Errc::SyntaxError) const {
    if (at.kind == Tok::Invalid) throw ParseFailure{Diagnostic{at.pos, Errc::SyntaxError, at.text}};
    throw ParseFailure{Diagnostic{at.pos, code, message + ", found " + describe(at)}};
  }

  const Token& expect(Tok kind, std::string_view what) {
    if (peek().kind != kind) fail(peek(), "expected " + std::string(what));
    return take();
  }

  void expect_keyword(std::string_view word) {
    if (!at_keyword(word)) fail(peek(), "expected '" + std::string(word) + "'");
    take();
  }

  // Skips to the next statement keyword, always making progress.
  void recover(std::size_t start) {
    if (i_ == start) take();
    while (peek().kind != Tok::End && !at_statement_start()) take();
  }

  void statement(ModelDocument& doc) {
    if (at_keyword("node")) {
      doc.nodes.push_back(node_decl());
    } else if (at_keyword("edge")) {
      doc.edges.push_back(edge_decl());
    } else if (at_keyword("policy")) {
      doc.policies.push_back(policy_decl());
    } else {
      fail(peek(), "expected 'node', 'edge' or 'policy'");
    }
  }

  bool at_name() const {
    return peek().kind == Tok::String || (peek().kind == Tok::Ident && !is_keyword(peek().text));
  }

  std::string name(std::string_view what) {
    if (!at_name()) {
      if (peek().kind == Tok::Ident)
        fail(peek(), "expected " + std::string(what) + " (keywords must be quoted to be used as names)");
      fail(peek(), "expected " + std::string(what));
    }
    const Token& tok = take();
    if (tok.text.empty())
      throw ParseFailure{Diagnostic{tok.pos, Errc::EmptyName, std::string(what) + " must not be empty"}};
    return tok.text;
  }

  // Labels, keys and relationship types may use keywords unquoted.
  std::string word(std::string_view what) {
    if (peek().kind != Tok::Ident && peek().kind != Tok::String)
      fail(peek(), "expected " + std::string(what));
    const Token& tok = take();
    if (tok.text.empty())
      throw ParseFailure{Diagnostic{tok.pos, Errc::EmptyName, std::string(what) + " must not be empty"}};
    return tok.text;
  }

  NodeDecl node_decl() {
    NodeDecl decl;
    decl.pos = take().pos;
    decl.name = name("node name");
    expect(Tok::Colon, "':' after node name");
    do {
      std::string label = word("label");
      if (std::find(decl.labels.begin(), decl.labels.end(), label) == decl.labels.end())
        decl.labels.push_back(std::move(label));
    } while (peek().kind == Tok::Comma && (take(), true));
    if (peek().kind == Tok::LBrace) {
      take();
      do {
        const Token& key_tok = peek();
        std::string key = word("property key");
        if (key == "name")
          throw ParseFailure{Diagnostic{key_tok.pos, Errc::SyntaxError,
                                        "property key 'name' is reserved for the node name"}};
        if (decl.properties.contains(key))
          throw ParseFailure{Diagnostic{key_tok.pos, Errc::SyntaxError,
                                        "duplicate property key '" + key + "'"}};
        expect(Tok::Equals, "'=' after property key");
        decl.properties.emplace(std::move(key), scalar());
      } while (peek().kind == Tok::Comma && (take(), true));
      expect(Tok::RBrace, "',' or '}' in property list");
    }
    return decl;
  }

  PropertyValue scalar() {
    const Token& tok = peek();
    switch (tok.kind) {
      case Tok::String:
        return take().text;
      case Tok::Integer: {
        std::int64_t value = 0;
        auto [ptr, ec] = std::from_chars(tok.text.data(), tok.text.data() + tok.text.size(), value);
        if (ec != std::errc{} || ptr != tok.text.data() + tok.text.size())
          throw ParseFailure{Diagnostic{tok.pos, Errc::SyntaxError, "integer out of range: " + tok.text}};
        take();
        return value;
      }
      case Tok::Decimal: {
        double value = 0;
        auto [ptr, ec] = std::from_chars(tok.text.data(), tok.text.data() + tok.text.size(), value);
        if (ec != std::errc{} || ptr != tok.text.data() + tok.text.size())
          throw ParseFailure{Diagnostic{tok.pos, Errc::SyntaxError, "decimal out of range: " + tok.text}};
        take();
        return value;
      }
      case Tok::Ident:
        if (tok.text == "true" || tok.text == "false") return take().text == "true";
        break;
      default:
        break;
    }
    fail(tok, "expected a string, number, true or false");
  }

  EdgeDecl edge_decl() {
    EdgeDecl decl;
    decl.pos = take().pos;
    decl.from = name("source node name");
    expect(Tok::EdgeOpen, "'-[' after source node");
    decl.rel_type = word("relationship type");
    expect(Tok::EdgeClose, "']->' after relationship type");
    decl.to = name("target node name");
    return decl;
  }

  PolicyDecl policy_decl() {
    PolicyDecl decl;
    decl.pos = take().pos;
    decl.name = name("policy name");
    if (at_keyword("permit")) {
      decl.decision = Decision::Permit;
    } else if (at_keyword("deny")) {
      decl.decision = Decision::Deny;
    } else {
      fail(peek(), "expected 'permit' or 'deny'");
    }
    take();
    if (at_keyword("score")) {
      take();
      const Token& tok = expect(Tok::Integer, "integer score");
      std::int64_t value = 0;
      auto [ptr, ec] = std::from_chars(tok.text.data(), tok.text.data() + tok.text.size(), value);
      if (ec != std::errc{})
        throw ParseFailure{Diagnostic{tok.pos, Errc::SyntaxError, "score out of range: " + tok.text}};
      decl.score = value;
    }
    expect(Tok::LBrace, "'{' to open the policy body");
    bool any_slot = false;
    while (peek().kind != Tok::RBrace) {
      std::optional<ConditionType> type;
      for (ConditionType t : kConditionTypes)
        if (at_keyword(slot_keyword(t))) type = t;
      if (!type) fail(peek(), any_slot ? "expected 'subject', 'action', 'object' or '}'"
                                       : "expected 'subject', 'action' or 'object'");
      take();
      expect(Tok::Colon, "':' after slot name");
      auto& exprs = decl.slots[slot_index(*type)];
      exprs.push_back(expr(0));
      while (peek().kind == Tok::Semicolon) {
        take();
        if (!at_expr_start()) break;
        exprs.push_back(expr(0));
      }
      any_slot = true;
    }
    take();
    return decl;
  }

  bool at_expr_start() const {
    return at_name() || at_keyword("not") || peek().kind == Tok::LParen;
  }

  ExprDecl expr(int nesting) {
    if (nesting > kMaxExprNesting)
      throw ParseFailure{Diagnostic{peek().pos, Errc::SyntaxError, "expression nested too deeply"}};
    ExprDecl out;
    out.pos = peek().pos;
    if (at_keyword("not")) {
      take();
      out.kind = ConditionExpr::Kind::Not;
      out.children.push_back(expr(nesting + 1));
      return out;
    }
    if (peek().kind == Tok::LParen) {
      take();
      out.children.push_back(expr(nesting + 1));
      std::optional<std::string> op;
      while (at_keyword("and") || at_keyword("or")) {
        const Token& op_tok = take();
        if (op && *op != op_tok.text)
          throw ParseFailure{Diagnostic{op_tok.pos, Errc::SyntaxError,
                                        "cannot mix 'and' and 'or' in one group; add parentheses"}};
        op = op_tok.text;
        out.children.push_back(expr(nesting + 1));
      }
      if (!op) fail(peek(), "expected 'and' or 'or'");
      expect(Tok::RParen, "')' to close the group");
      out.kind = *op == "and" ? ConditionExpr::Kind::And : ConditionExpr::Kind::Or;
      return out;
    }
    out.kind = ConditionExpr::Kind::Ref;
    out.name = name("condition name, 'not' or '('");
    return out;
  }

  std::vector<Token> toks_;
  std::size_t i_ = 0;
};

// Loading ------------------------------------------------------------------

struct Resolver {
  const Graph& graph;
  std::vector<Diagnostic>& errors;

  std::optional<ConditionExpr> operator()(const ExprDecl& decl) const {
    switch (decl.kind) {
      case ConditionExpr::Kind::Ref: {
        auto ref = graph.find_node(decl.name);
        if (!ref) {
          errors.push_back({decl.pos, Errc::DanglingConditionRef,
                            "condition '" + decl.name + "' is not a declared node"});
          return std::nullopt;
        }
        return ConditionExpr::ref(*ref);
      }
      case ConditionExpr::Kind::Not: {
        auto inner = (*this)(decl.children.front());
        if (!inner) return std::nullopt;
        return ConditionExpr::negate(std::move(*inner));
      }
      case ConditionExpr::Kind::And:
      case ConditionExpr::Kind::Or: {
        std::vector<ConditionExpr> children;
        bool ok = true;
        for (const auto& child : decl.children) {
          auto c = (*this)(child);
          if (c) children.push_back(std::move(*c));
          else ok = false;
        }
        if (!ok) return std::nullopt;
        if (children.size() < 2) {
          errors.push_back({decl.pos, Errc::MalformedExpression, "group needs two operands"});
          return std::nullopt;
        }
        return decl.kind == ConditionExpr::Kind::And ? ConditionExpr::all_of(std::move(children))
                                                     : ConditionExpr::any_of(std::move(children));
      }
    }
    return std::nullopt;
  }
};

std::string missing_list(const std::set<ConditionType>& missing) {
  std::string out;
  for (ConditionType t : missing) {
    if (!out.empty()) out += ", ";
    out += relationship_name(t);
  }
  return out;
}

// Serialization ------------------------------------------------------------

std::string quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  out += '"';
  return out;
}

std::string format_name(std::string_view name) {
  return is_bare_name(name) ? std::string(name) : quote(name);
}

// Labels, keys and relationship types accept keywords unquoted.
std::string format_word(std::string_view word) {
  bool bare = !word.empty() && ident_start(word.front()) &&
              std::all_of(word.begin(), word.end(), ident_char);
  return bare ? std::string(word) : quote(word);
}

std::string format_scalar(const PropertyValue& value) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::string>) {
          return quote(v);
        } else if constexpr (std::is_same_v<T, bool>) {
          return v ? "true" : "false";
        } else if constexpr (std::is_same_v<T, std::int64_t>) {
          return std::to_string(v);
        } else {
          char buf[64];
          auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
          std::string s(buf, ptr);
          if (s.find_first_of(".e") == std::string::npos) s += ".0";
          return s;
        }
      },
      value);
}

ExprDecl to_decl(const Graph& graph, const ConditionExpr& expr) {
  ExprDecl out;
  out.kind = expr.kind();
  if (expr.is_ref()) {
    out.name = graph.node_name(expr.node());
    return out;
  }
  for (const auto& child : expr.children()) out.children.push_back(to_decl(graph, child));
  return out;
}

}  // namespace

std::string Diagnostic::to_string() const {
  return std::to_string(pos.line) + ":" + std::to_string(pos.column) + ": " +
         std::string(errc_name(code)) + ": " + message;
}

bool is_bare_name(std::string_view name) noexcept {
  if (name.empty() || !ident_start(name.front())) return false;
  if (!std::all_of(name.begin(), name.end(), ident_char)) return false;
  return !is_keyword(name);
}

std::string format_expr(const ExprDecl& expr) {
  switch (expr.kind) {
    case ConditionExpr::Kind::Ref:
      return format_name(expr.name);
    case ConditionExpr::Kind::Not:
      return "not " + format_expr(expr.children.front());
    case ConditionExpr::Kind::And:
    case ConditionExpr::Kind::Or: {
      const char* op = expr.kind == ConditionExpr::Kind::And ? " and " : " or ";
      std::string out = "(";
      for (std::size_t i = 0; i < expr.children.size(); ++i) {
        if (i > 0) out += op;
        out += format_expr(expr.children[i]);
      }
      return out + ")";
    }
  }
  return {};
}

ParseResult parse_document(std::string_view text) {
  return Parser(Lexer(text).run()).run();
}

ParseResult parse_model(std::string_view text) {
  ParseResult result = parse_document(text);
  if (!result.ok()) return result;
  LoadResult loaded = load_model(result.document);
  result.errors = std::move(loaded.errors);
  return result;
}

LoadResult load_model(const ModelDocument& doc, const LoadOptions& options) {
  LoadResult result;
  auto& errors = result.errors;
  Model model;
  Graph& graph = model.graph();

  for (const NodeDecl& decl : doc.nodes) {
    if (std::find(decl.labels.begin(), decl.labels.end(), labels::kPolicy) != decl.labels.end()) {
      errors.push_back({decl.pos, Errc::InvalidNode,
                        "label 'Policy' is reserved for policy declarations ('" + decl.name + "')"});
      continue;
    }
    try {
      graph.add_node(decl.name, decl.labels, decl.properties);
    } catch (const Error& e) {
      errors.push_back({decl.pos, e.code(), e.message()});
    }
  }

  for (const EdgeDecl& decl : doc.edges) {
    auto from = graph.find_node(decl.from);
    auto to = graph.find_node(decl.to);
    if (!from) errors.push_back({decl.pos, Errc::UnknownNode, "edge source '" + decl.from + "' is not declared"});
    if (!to) errors.push_back({decl.pos, Errc::UnknownNode, "edge target '" + decl.to + "' is not declared"});
    if (!from || !to) continue;
    try {
      graph.add_edge(*from, decl.rel_type, *to);
    } catch (const Error& e) {
      errors.push_back({decl.pos, e.code(), e.message()});
    }
  }

  // Cycles are checked before policies add their nodes so the message names
  // the declaring edge.
  if (auto cycle = graph.find_attribute_cycle(); !cycle.empty()) {
    std::string path;
    for (NodeRef ref : cycle) path += "'" + graph.node(ref).name + "' -> ";
    path += "'" + graph.node(cycle.front()).name + "'";
    SourcePos pos;
    const std::string& head = graph.node(cycle.front()).name;
    const std::string& next = graph.node(cycle.size() > 1 ? cycle[1] : cycle.front()).name;
    for (const EdgeDecl& decl : doc.edges)
      if (decl.rel_type == rel::kHasAttr && decl.from == head && decl.to == next) {
        pos = decl.pos;
        break;
      }
    errors.push_back({pos, Errc::AttributeCycle, "HAS_ATTR cycle " + path});
  }

  std::unordered_set<std::string> policy_names;
  for (const PolicyDecl& decl : doc.policies) {
    if (!policy_names.insert(decl.name).second) {
      errors.push_back({decl.pos, Errc::DuplicatePolicyName, "policy '" + decl.name + "' is declared twice"});
      continue;
    }
    std::set<ConditionType> missing;
    Conditions conditions;
    const std::size_t before = errors.size();
    Resolver resolve{graph, errors};
    for (ConditionType t : kConditionTypes) {
      const auto& exprs = decl.slots[slot_index(t)];
      if (exprs.empty()) missing.insert(t);
      for (const ExprDecl& e : exprs)
        if (auto c = resolve(e)) conditions[t].insert(std::move(*c));
    }
    if (!missing.empty())
      errors.push_back({decl.pos, Errc::MissingConditionType,
                        "policy '" + decl.name + "' has no " + missing_list(missing) + " condition"});
    if (errors.size() != before) continue;
    try {
      model.create_policy(decl.name, decl.decision, decl.score, std::move(conditions));
    } catch (const Error& e) {
      errors.push_back({decl.pos, e.code(), e.message()});
    }
  }

  if (!errors.empty()) return result;
  try {
    model.freeze(options.attr_depth);
  } catch (const Error& e) {
    errors.push_back({SourcePos{}, e.code(), e.message()});
    return result;
  }
  result.model = std::move(model);
  return result;
}

LoadResult load_model_text(std::string_view text, const LoadOptions& options) {
  ParseResult parsed = parse_document(text);
  if (!parsed.ok()) {
    LoadResult result;
    result.errors = std::move(parsed.errors);
    return result;
  }
  return load_model(parsed.document, options);
}

LoadResult load_model_file(const std::filesystem::path& path, const LoadOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    LoadResult result;
    result.errors.push_back({SourcePos{}, Errc::IoError, "cannot open '" + path.string() + "'"});
    return result;
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return load_model_text(buffer.str(), options);
}

std::vector<PolicyDeclReport> validate_policy_declarations(const ModelDocument& doc) {
  std::unordered_set<std::string> nodes;
  for (const NodeDecl& n : doc.nodes) nodes.insert(n.name);

  std::vector<PolicyDeclReport> out;
  for (const PolicyDecl& decl : doc.policies) {
    PolicyDeclReport entry{decl.name, decl.pos, {}};
    for (ConditionType t : kConditionTypes) {
      const auto& exprs = decl.slots[slot_index(t)];
      if (exprs.empty()) entry.report.missing_types.insert(t);
      std::vector<const ExprDecl*> stack;
      for (const auto& e : exprs) stack.push_back(&e);
      while (!stack.empty()) {
        const ExprDecl* e = stack.back();
        stack.pop_back();
        if (e->kind == ConditionExpr::Kind::Ref) {
          if (!nodes.contains(e->name)) entry.report.dangling_refs.insert(e->name);
        } else {
          for (const auto& c : e->children) stack.push_back(&c);
        }
      }
    }
    entry.report.valid = entry.report.missing_types.empty() && entry.report.dangling_refs.empty();
    out.push_back(std::move(entry));
  }
  return out;
}

std::string serialize_model(const ModelDocument& doc) {
  std::ostringstream out;

  std::vector<const NodeDecl*> nodes;
  for (const auto& n : doc.nodes) nodes.push_back(&n);
  std::stable_sort(nodes.begin(), nodes.end(),
                   [](const NodeDecl* a, const NodeDecl* b) { return a->name < b->name; });
  for (const NodeDecl* n : nodes) {
    out << "node " << format_name(n->name) << ":";
    for (std::size_t i = 0; i < n->labels.size(); ++i)
      out << (i == 0 ? " " : ", ") << format_word(n->labels[i]);
    if (!n->properties.empty()) {
      out << " {";
      bool first = true;
      for (const auto& [key, value] : n->properties) {
        out << (first ? "" : ", ") << format_word(key) << " = " << format_scalar(value);
        first = false;
      }
      out << "}";
    }
    out << "\n";
  }

  std::set<std::tuple<std::string, std::string, std::string>> edges;
  for (const auto& e : doc.edges) edges.emplace(e.from, e.rel_type, e.to);
  if (!nodes.empty() && !edges.empty()) out << "\n";
  for (const auto& [from, type, to] : edges)
    out << "edge " << format_name(from) << " -[" << format_word(type) << "]-> " << format_name(to)
        << "\n";

  for (std::size_t p = 0; p < doc.policies.size(); ++p) {
    const PolicyDecl& decl = doc.policies[p];
    if (p > 0 || !nodes.empty() || !edges.empty()) out << "\n";
    out << "policy " << format_name(decl.name) << " "
        << (decl.decision == Decision::Permit ? "permit" : "deny");
    if (decl.score) out << " score " << *decl.score;
    out << " {\n";
    for (ConditionType t : kConditionTypes) {
      std::set<std::string> exprs;
      for (const auto& e : decl.slots[slot_index(t)]) exprs.insert(format_expr(e));
      if (exprs.empty()) continue;
      out << "  " << slot_keyword(t) << ":";
      for (const auto& e : exprs) out << " " << e << ";";
      out << "\n";
    }
    out << "}\n";
  }
  return out.str();
}

ModelDocument to_document(const Model& model) {
  ModelDocument doc;
  const Graph& graph = model.graph();
  for (NodeRef ref : graph.nodes()) {
    const Node& n = graph.node(ref);
    if (n.has_label(labels::kPolicy)) continue;
    doc.nodes.push_back(NodeDecl{n.name, n.labels, n.properties, {}});
  }
  for (const Edge& e : graph.edges()) {
    if (rel::is_condition(e.rel_type)) continue;
    if (graph.node(e.from).has_label(labels::kPolicy) || graph.node(e.to).has_label(labels::kPolicy))
      continue;
    doc.edges.push_back(EdgeDecl{graph.node(e.from).name, e.rel_type, graph.node(e.to).name, {}});
  }
  for (const Policy& p : model.policies().all()) {
    PolicyDecl decl;
    decl.name = p.name;
    decl.decision = p.decision;
    if (p.score != 0) decl.score = p.score;
    for (ConditionType t : kConditionTypes)
      for (const auto& expr : p.conditions[t])
        decl.slots[slot_index(t)].push_back(to_decl(graph, expr));
    doc.policies.push_back(std::move(decl));
  }
  return doc;
}

}  // namespace gabac
