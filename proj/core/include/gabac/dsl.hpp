#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gabac/error.hpp"
#include "gabac/graph.hpp"
#include "gabac/model.hpp"
#include "gabac/policy.hpp"

// Model definition language (.abac files):
//
//   model    ::= stmt*
//   stmt     ::= node | edge | policy
//   node     ::= "node" name ":" label ("," label)* props?
//   props    ::= "{" key "=" scalar ("," key "=" scalar)* "}"
//   edge     ::= "edge" name "-[" reltype "]->" name
//   policy   ::= "policy" name ("permit" | "deny") ("score" integer)? "{" slot+ "}"
//   slot     ::= ("subject" | "action" | "object") ":" expr (";" expr)* ";"?
//   expr     ::= "not" expr | "(" expr (("and" | "or") expr)+ ")" | name
//   name     ::= IDENT | DQUOTED_STRING
//
// `#` starts a line comment. Keywords are reserved and must be quoted to be
// used as names. Labels, keys and relationship types also accept quoted
// strings. A parenthesized group uses a single operator.

namespace gabac {

struct SourcePos {
  int line = 1;
  int column = 1;

  friend bool operator==(const SourcePos&, const SourcePos&) = default;
};

struct Diagnostic {
  SourcePos pos;
  Errc code = Errc::SyntaxError;
  std::string message;

  /// "line:column: Code: message"
  std::string to_string() const;
};

struct ExprDecl {
  ConditionExpr::Kind kind = ConditionExpr::Kind::Ref;
  std::string name;  // Ref only
  std::vector<ExprDecl> children;
  SourcePos pos;
};

struct NodeDecl {
  std::string name;
  std::vector<std::string> labels;
  Properties properties;
  SourcePos pos;
};

struct EdgeDecl {
  std::string from;
  std::string rel_type;
  std::string to;
  SourcePos pos;
};

struct PolicyDecl {
  std::string name;
  Decision decision = Decision::Permit;
  std::optional<std::int64_t> score;
  /// Indexed by slot_index(ConditionType).
  std::array<std::vector<ExprDecl>, 3> slots;
  SourcePos pos;
};

/// Declarations in source order.
struct ModelDocument {
  std::vector<NodeDecl> nodes;
  std::vector<EdgeDecl> edges;
  std::vector<PolicyDecl> policies;
};

struct ParseResult {
  ModelDocument document;
  std::vector<Diagnostic> errors;

  bool ok() const noexcept { return errors.empty(); }
};

/// Syntax only. Never throws; recovers at the next statement keyword so
/// one pass reports every malformed statement.
ParseResult parse_document(std::string_view text);

/// Syntax plus the semantic checks of load_model (duplicate names, unknown
/// edge endpoints, dangling or missing conditions, HAS_ATTR cycles).
ParseResult parse_model(std::string_view text);

struct LoadOptions {
  /// Attribute depth override; must not be below the computed depth.
  std::optional<int> attr_depth;
};

struct LoadResult {
  std::optional<Model> model;  // frozen; absent whenever errors is non-empty
  std::vector<Diagnostic> errors;

  bool ok() const noexcept { return model.has_value(); }
};

/// Builds a frozen model, or reports every positioned error. Never returns
/// a partial model.
LoadResult load_model(const ModelDocument& doc, const LoadOptions& options = {});

/// parse_document + load_model.
LoadResult load_model_text(std::string_view text, const LoadOptions& options = {});
LoadResult load_model_file(const std::filesystem::path& path, const LoadOptions& options = {});

/// Validity of each policy declaration against the declared nodes, by name.
struct PolicyDeclReport {
  std::string name;
  SourcePos pos;
  ValidityReport report;
};
std::vector<PolicyDeclReport> validate_policy_declarations(const ModelDocument& doc);

/// Canonical text: nodes sorted by name, edges by (from, type, to), policies
/// in declaration order (their order is the first-applicable order).
/// Names are quoted only when they are not plain identifiers.
std::string serialize_model(const ModelDocument& doc);

/// Document describing a loaded model (policy nodes and condition edges are
/// expressed as policy declarations).
ModelDocument to_document(const Model& model);

/// True when `name` can be written without quotes.
bool is_bare_name(std::string_view name) noexcept;

/// Source form of a single expression, e.g. `(Manager or (Senior and Employee))`.
std::string format_expr(const ExprDecl& expr);

}  // namespace gabac
