#include "gabac/policy.hpp"

#include <algorithm>
#include <utility>

#include "gabac/error.hpp"

namespace gabac {

std::string_view relationship_name(ConditionType t) noexcept {
  switch (t) {
    case ConditionType::Subject: return rel::kSubCon;
    case ConditionType::Action: return rel::kActCon;
    case ConditionType::Object: return rel::kObjCon;
  }
  return {};
}

std::string_view slot_keyword(ConditionType t) noexcept {
  switch (t) {
    case ConditionType::Subject: return "subject";
    case ConditionType::Action: return "action";
    case ConditionType::Object: return "object";
  }
  return {};
}

std::string_view to_string(Decision d) noexcept {
  return d == Decision::Permit ? "Permit" : "Deny";
}

// ConditionExpr ------------------------------------------------------------

ConditionExpr::ConditionExpr(Kind kind, NodeRef node, std::vector<ConditionExpr> children)
    : kind_(kind), node_(node), children_(std::move(children)) {}

ConditionExpr ConditionExpr::ref(NodeRef node) { return ConditionExpr(Kind::Ref, node, {}); }

ConditionExpr ConditionExpr::negate(ConditionExpr inner) {
  std::vector<ConditionExpr> children;
  children.push_back(std::move(inner));
  return ConditionExpr(Kind::Not, NodeRef{}, std::move(children));
}

ConditionExpr ConditionExpr::all_of(std::vector<ConditionExpr> children) {
  if (children.size() < 2) throw Error(Errc::MalformedExpression, "AND needs at least two operands");
  return ConditionExpr(Kind::And, NodeRef{}, std::move(children));
}

ConditionExpr ConditionExpr::any_of(std::vector<ConditionExpr> children) {
  if (children.size() < 2) throw Error(Errc::MalformedExpression, "OR needs at least two operands");
  return ConditionExpr(Kind::Or, NodeRef{}, std::move(children));
}

bool ConditionExpr::contains_negation() const noexcept {
  if (kind_ == Kind::Not) return true;
  return std::any_of(children_.begin(), children_.end(),
                     [](const ConditionExpr& c) { return c.contains_negation(); });
}

void ConditionExpr::collect_refs(std::vector<NodeRef>& out) const {
  if (kind_ == Kind::Ref) {
    out.push_back(node_);
    return;
  }
  for (const auto& child : children_) child.collect_refs(out);
}

bool operator==(const ConditionExpr& a, const ConditionExpr& b) {
  return (a <=> b) == std::strong_ordering::equal;
}

std::strong_ordering operator<=>(const ConditionExpr& a, const ConditionExpr& b) {
  if (auto c = a.kind_ <=> b.kind_; c != 0) return c;
  if (a.kind_ == ConditionExpr::Kind::Ref) return a.node_ <=> b.node_;
  const std::size_t n = std::min(a.children_.size(), b.children_.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (auto c = a.children_[i] <=> b.children_[i]; c != 0) return c;
  }
  return a.children_.size() <=> b.children_.size();
}

// Policy -------------------------------------------------------------------

bool Policy::is_simple() const noexcept {
  for (const auto& set : conditions.sets)
    for (const auto& expr : set)
      if (!expr.is_ref()) return false;
  return true;
}

ValidityReport validate_policy(const Graph& graph, const Policy& policy) {
  ValidityReport report;
  std::vector<NodeRef> refs;
  for (ConditionType t : kConditionTypes) {
    const ConditionSet& set = policy.conditions[t];
    if (set.empty()) report.missing_types.insert(t);
    for (const auto& expr : set) expr.collect_refs(refs);
  }
  for (NodeRef ref : refs) {
    if (!graph.contains(ref) || graph.node(ref).has_label(labels::kPolicy))
      report.dangling_refs.insert(graph.node_name(ref));
  }
  report.valid = report.missing_types.empty() && report.dangling_refs.empty();
  return report;
}

const ConditionSet& required_conditions(const Policy& policy, ConditionType t) {
  return policy.conditions[t];
}

namespace {

using Term = std::set<NodeRef>;
using Dnf = std::vector<Term>;

void append_unique(Dnf& dnf, Term term) {
  if (std::find(dnf.begin(), dnf.end(), term) == dnf.end()) dnf.push_back(std::move(term));
}

Dnf conjoin(const Dnf& left, const Dnf& right) {
  Dnf out;
  for (const Term& a : left) {
    for (const Term& b : right) {
      Term merged = a;
      merged.insert(b.begin(), b.end());
      append_unique(out, std::move(merged));
    }
  }
  return out;
}

Dnf to_dnf(const ConditionExpr& expr) {
  switch (expr.kind()) {
    case ConditionExpr::Kind::Ref:
      return Dnf{Term{expr.node()}};
    case ConditionExpr::Kind::Or: {
      Dnf out;
      for (const auto& child : expr.children())
        for (Term& term : to_dnf(child)) append_unique(out, std::move(term));
      return out;
    }
    case ConditionExpr::Kind::And: {
      Dnf out{Term{}};
      for (const auto& child : expr.children()) out = conjoin(out, to_dnf(child));
      return out;
    }
    case ConditionExpr::Kind::Not:
      break;
  }
  throw Error(Errc::NegationNotExpandable, "NOT cannot be expanded");
}

}  // namespace

std::vector<Policy> dnf_expand(const Policy& policy) {
  std::array<Dnf, 3> slots;
  for (ConditionType t : kConditionTypes) {
    Dnf slot{Term{}};
    for (const auto& expr : policy.conditions[t]) {
      if (expr.contains_negation())
        throw Error(Errc::NegationNotExpandable,
                    "policy '" + policy.name + "' contains a NOT condition");
      slot = conjoin(slot, to_dnf(expr));
    }
    slots[slot_index(t)] = std::move(slot);
  }

  std::vector<Policy> out;
  std::size_t index = 1;
  for (const Term& sub : slots[0]) {
    for (const Term& act : slots[1]) {
      for (const Term& obj : slots[2]) {
        Policy simple;
        simple.name = policy.name + "#" + std::to_string(index++);
        simple.decision = policy.decision;
        simple.score = policy.score;
        simple.seq = policy.seq;
        const std::array<const Term*, 3> terms{&sub, &act, &obj};
        for (ConditionType t : kConditionTypes)
          for (NodeRef ref : *terms[slot_index(t)])
            simple.conditions[t].insert(ConditionExpr::ref(ref));
        out.push_back(std::move(simple));
      }
    }
  }
  return out;
}

// PolicyStore --------------------------------------------------------------

PolicyRef PolicyStore::create_policy(Graph& graph, std::string name, Decision decision,
                                     std::optional<std::int64_t> score, Conditions conditions) {
  if (graph.frozen()) throw Error(Errc::GraphFrozen, "cannot add policies to a frozen model");
  if (name.empty()) throw Error(Errc::EmptyName, "policy name must not be empty");
  if (by_name_.contains(name))
    throw Error(Errc::DuplicatePolicyName, "policy '" + name + "' already exists");
  if (graph.find_node(name))
    throw Error(Errc::DuplicateName, "policy name '" + name + "' clashes with a node");

  Policy policy;
  policy.name = std::move(name);
  policy.decision = decision;
  policy.score = score.value_or(0);
  policy.conditions = std::move(conditions);

  ValidityReport report = gabac::validate_policy(graph, policy);
  if (!report.missing_types.empty()) {
    std::string missing;
    for (ConditionType t : report.missing_types) {
      if (!missing.empty()) missing += ", ";
      missing += relationship_name(t);
    }
    throw Error(Errc::MissingConditionType, "policy '" + policy.name + "' has no " + missing);
  }
  if (!report.dangling_refs.empty()) {
    throw Error(Errc::DanglingConditionRef,
                "policy '" + policy.name + "' references '" + *report.dangling_refs.begin() + "'");
  }

  Properties props;
  props.emplace("decision", std::string(to_string(decision)));
  props.emplace("score", policy.score);
  NodeRef node = graph.add_node(policy.name, {std::string(labels::kPolicy)}, std::move(props));
  if (policy.is_simple()) {
    for (ConditionType t : kConditionTypes)
      for (const auto& expr : policy.conditions[t])
        graph.insert_edge(expr.node(), relationship_name(t), node);
  }

  policy.node = node;
  policy.seq = next_seq_++;
  PolicyRef ref{static_cast<std::uint32_t>(policies_.size())};
  by_name_.emplace(policy.name, ref);
  by_node_.emplace(node.id, ref);
  policies_.push_back(std::move(policy));
  return ref;
}

const Policy& PolicyStore::policy(PolicyRef ref) const {
  if (ref.index >= policies_.size())
    throw Error(Errc::UnknownPolicy, "no policy with index " + std::to_string(ref.index));
  return policies_[ref.index];
}

std::optional<PolicyRef> PolicyStore::find_policy(std::string_view name) const {
  auto it = by_name_.find(std::string(name));
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

std::optional<PolicyRef> PolicyStore::policy_at_node(NodeRef node) const {
  auto it = by_node_.find(node.id);
  if (it == by_node_.end()) return std::nullopt;
  return it->second;
}

ValidityReport PolicyStore::validate_policy(const Graph& graph, PolicyRef ref) const {
  return gabac::validate_policy(graph, policy(ref));
}

const ConditionSet& PolicyStore::required_conditions(PolicyRef ref, ConditionType t) const {
  return policy(ref).conditions[t];
}

std::vector<Policy> PolicyStore::dnf_expand(PolicyRef ref) const {
  return gabac::dnf_expand(policy(ref));
}

std::vector<PolicyRef> PolicyStore::refs() const {
  std::vector<PolicyRef> out;
  out.reserve(policies_.size());
  for (std::uint32_t i = 0; i < policies_.size(); ++i) out.push_back(PolicyRef{i});
  return out;
}

}  // namespace gabac
