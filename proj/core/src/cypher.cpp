#include "gabac/cypher.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <set>
#include <sstream>

#include "gabac/error.hpp"

namespace gabac {
namespace {

std::string literal(std::string_view s) {
  std::string out = "'";
  for (char c : s) {
    switch (c) {
      case '\'': out += "''"; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out + "'";
}

bool plain_identifier(std::string_view s) {
  if (s.empty()) return false;
  auto alpha = [](char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_'; };
  if (!alpha(s.front())) return false;
  return std::all_of(s.begin(), s.end(), [&](char c) { return alpha(c) || (c >= '0' && c <= '9'); });
}

std::string symbol(std::string_view s) {
  if (plain_identifier(s)) return std::string(s);
  std::string out = "`";
  for (char c : s) {
    if (c == '`') out += "``";
    else out += c;
  }
  return out + "`";
}

std::string value_literal(const PropertyValue& value) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::string>) {
          return literal(v);
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

std::string node_pattern(const NodeDecl& n) {
  std::string out = "(";
  for (const auto& label : n.labels) out += ":" + symbol(label);
  if (!n.labels.empty()) out += " ";
  out += "{name:" + literal(n.name);
  for (const auto& [key, value] : n.properties) out += ", " + symbol(key) + ":" + value_literal(value);
  return out + "})";
}

class PolicyWriter {
 public:
  explicit PolicyWriter(const PolicyDecl& decl) : decl_(decl) {}

  std::string write() {
    // Condition expressions in canonical (sorted source-text) order.
    std::array<std::vector<const ExprDecl*>, 3> slots;
    for (ConditionType t : kConditionTypes) {
      std::map<std::string, const ExprDecl*> sorted;
      for (const auto& e : decl_.slots[slot_index(t)]) sorted.emplace(format_expr(e), &e);
      for (const auto& [text, e] : sorted) slots[slot_index(t)].push_back(e);
    }
    for (const auto& slot : slots)
      for (const ExprDecl* e : slot) collect_names(*e);

    for (ConditionType t : kConditionTypes)
      for (const ExprDecl* e : slots[slot_index(t)]) connect(*e, relationship_name(t), "pol");

    std::ostringstream out;
    out << "// " << decl_.name << " - " << to_string(decl_.decision) << "\n";
    if (!variables_.empty()) {
      out << "match ";
      bool first = true;
      for (const auto& name : order_) {
        out << (first ? "" : ", ") << "(" << variables_.at(name) << " {name:" << literal(name) << "})";
        first = false;
      }
      out << "\n";
    }
    out << "create (pol:Policy {name:" << literal(decl_.name)
        << ", decision:" << literal(to_string(decl_.decision));
    if (decl_.score) out << ", score:" << *decl_.score;
    out << "})\n";
    for (const auto& line : operators_) out << line << "\n";
    for (std::size_t i = 0; i < merges_.size(); ++i)
      out << merges_[i] << (i + 1 == merges_.size() ? ";\n" : "\n");
    if (merges_.empty()) out << ";\n";
    return out.str();
  }

 private:
  void collect_names(const ExprDecl& e) {
    if (e.kind == ConditionExpr::Kind::Ref) {
      if (!variables_.contains(e.name)) {
        variables_.emplace(e.name, "c" + std::to_string(variables_.size() + 1));
        order_.push_back(e.name);
      }
      return;
    }
    for (const auto& c : e.children) collect_names(c);
  }

  void connect(const ExprDecl& e, std::string_view con, const std::string& target) {
    if (e.kind == ConditionExpr::Kind::Ref) {
      const std::string& var = variables_.at(e.name);
      if (target == "pol")
        merges_.push_back("merge (pol)<-[:" + std::string(con) + "]-(" + var + ")");
      else
        merges_.push_back("merge (" + var + ")-[:" + std::string(con) + "]->(" + target + ")");
      return;
    }
    const char* label = e.kind == ConditionExpr::Kind::Not   ? "NOT"
                        : e.kind == ConditionExpr::Kind::And ? "AND"
                                                             : "OR";
    std::string var = "x" + std::to_string(++operator_count_);
    operators_.push_back("create (" + var + ":" + label + ")");
    merges_.push_back("merge (" + var + ")-[:" + std::string(con) + "]->(" + target + ")");
    for (const auto& c : e.children) connect(c, con, var);
  }

  const PolicyDecl& decl_;
  std::map<std::string, std::string> variables_;
  std::vector<std::string> order_;
  std::vector<std::string> operators_;
  std::vector<std::string> merges_;
  int operator_count_ = 0;
};

}  // namespace

std::string emit_cypher_data(const ModelDocument& doc) {
  std::ostringstream out;
  for (const NodeDecl& n : doc.nodes) out << "create " << node_pattern(n) << ";\n";
  std::set<std::tuple<std::string, std::string, std::string>> seen;
  for (const EdgeDecl& e : doc.edges) {
    if (!seen.emplace(e.from, e.rel_type, e.to).second) continue;
    out << "match (a {name:" << literal(e.from) << "}), (b {name:" << literal(e.to)
        << "}) merge (a)-[:" << symbol(e.rel_type) << "]->(b);\n";
  }
  return out.str();
}

std::string emit_cypher_policies(const ModelDocument& doc) {
  std::string out;
  for (std::size_t i = 0; i < doc.policies.size(); ++i) {
    if (i > 0) out += "\n";
    out += PolicyWriter(doc.policies[i]).write();
  }
  return out;
}

std::string emit_cypher_decision_query(CombiningAlgorithm alg, int depth) {
  if (alg == CombiningAlgorithm::FirstApplicable || alg == CombiningAlgorithm::MaxScoreDenyOverrides)
    throw Error(Errc::UnsupportedAlgorithm,
                "no decision statement is exported for " + std::string(to_string(alg)));
  if (depth < 0) throw Error(Errc::InvalidDepth, "depth must be non-negative");

  const bool shortest = alg == CombiningAlgorithm::ShortestPathDenyOverrides;
  const std::string hops = "[:HAS_ATTR*0.." + std::to_string(depth) + "]";

  struct Stage {
    const char* title;
    const char* var;
    const char* param;
    std::string_view con;
  };
  const Stage stages[] = {
      {"Subject", "sub", "SUBJECT_NAME", rel::kSubCon},
      {"Object", "obj", "OBJECT_NAME", rel::kObjCon},
      {"Action", "act", "ACTION_NAME", rel::kActCon},
  };

  std::ostringstream out;
  out << "with $request as req\n";
  for (std::size_t i = 0; i < 3; ++i) {
    const Stage& s = stages[i];
    const std::string con(s.con);
    out << "// Stage " << i + 1 << " - " << s.title << " Conditions\n";
    out << "match " << (shortest ? "path=" : "") << "(" << s.var << " {name:req." << s.param << "})-"
        << hops << "->(sc)-[:" << con << "]->(pol" << (i == 0 ? ":Policy" : "") << ")\n";
    if (shortest) {
      // Slot length is the shortest path to any satisfied condition.
      out << "with req, pol, " << (i == 0 ? "" : "plen, ")
          << "min(length(path)) as slen, size(collect(distinct sc)) as sat_cons\n";
      out << "match (pol)<-[:" << con << "]-(rc)\n";
      out << "with req, pol, " << (i == 0 ? "slen" : "plen + slen")
          << " as plen, sat_cons, size(collect(rc)) as req_cons where req_cons = sat_cons\n";
    } else {
      out << "with req, pol, size(collect(distinct sc)) as sat_cons\n";
      out << "match (pol)<-[:" << con << "]-(rc)\n";
      out << "with req, pol, sat_cons, size(collect(rc)) as req_cons where req_cons = sat_cons\n";
    }
  }
  switch (alg) {
    case CombiningAlgorithm::PermitOverrides:
      out << "return case when 'Permit' in collect(pol.decision) then 'Permit' else 'Deny' end as "
             "decision\n";
      break;
    case CombiningAlgorithm::ShortestPathDenyOverrides:
      out << "with plen, collect(pol) as pols order by plen asc limit 1\n";
      out << "unwind pols as pol\n";
      [[fallthrough]];
    default:
      out << "return case when count(pol) = 0 or 'Deny' in collect(pol.decision) then 'Deny' else "
             "'Permit' end as decision\n";
      break;
  }
  return out.str();
}

}  // namespace gabac
