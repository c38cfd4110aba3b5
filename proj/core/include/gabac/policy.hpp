#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "gabac/graph.hpp"

namespace gabac {

/// Condition types, one per query-primitive slot.
enum class ConditionType : std::uint8_t { Subject = 0, Action = 1, Object = 2 };

inline constexpr std::array<ConditionType, 3> kConditionTypes{
    ConditionType::Subject, ConditionType::Action, ConditionType::Object};

constexpr std::size_t slot_index(ConditionType t) noexcept { return static_cast<std::size_t>(t); }

/// "SUB_CON", "ACT_CON" or "OBJ_CON".
std::string_view relationship_name(ConditionType t) noexcept;
/// "subject", "action" or "object".
std::string_view slot_keyword(ConditionType t) noexcept;

/// A condition on one query primitive: a reference to a graph node, or a
/// NOT / AND / OR combination of conditions. Comparison is structural.
class ConditionExpr {
 public:
  enum class Kind : std::uint8_t { Ref, Not, And, Or };

  static ConditionExpr ref(NodeRef node);
  static ConditionExpr negate(ConditionExpr inner);
  /// Throws MalformedExpression with fewer than two children.
  static ConditionExpr all_of(std::vector<ConditionExpr> children);
  static ConditionExpr any_of(std::vector<ConditionExpr> children);

  Kind kind() const noexcept { return kind_; }
  bool is_ref() const noexcept { return kind_ == Kind::Ref; }
  /// Target of a Ref expression.
  NodeRef node() const noexcept { return node_; }
  /// Operand of Not is the single child; And/Or have two or more.
  const std::vector<ConditionExpr>& children() const noexcept { return children_; }

  bool contains_negation() const noexcept;
  /// Every Ref leaf, in left-to-right order.
  void collect_refs(std::vector<NodeRef>& out) const;

  friend bool operator==(const ConditionExpr& a, const ConditionExpr& b);
  friend std::strong_ordering operator<=>(const ConditionExpr& a, const ConditionExpr& b);

 private:
  ConditionExpr(Kind kind, NodeRef node, std::vector<ConditionExpr> children);

  Kind kind_ = Kind::Ref;
  NodeRef node_{};
  std::vector<ConditionExpr> children_;
};

/// Conditions of one type are conjunctive.
using ConditionSet = std::set<ConditionExpr>;

struct Conditions {
  std::array<ConditionSet, 3> sets;

  ConditionSet& operator[](ConditionType t) { return sets[slot_index(t)]; }
  const ConditionSet& operator[](ConditionType t) const { return sets[slot_index(t)]; }

  friend bool operator==(const Conditions&, const Conditions&) = default;
};

enum class Decision : std::uint8_t { Permit, Deny };

std::string_view to_string(Decision d) noexcept;

struct PolicyRef {
  std::uint32_t index = 0;

  friend constexpr auto operator<=>(PolicyRef, PolicyRef) = default;
};

struct Policy {
  std::string name;
  Decision decision = Decision::Permit;
  std::int64_t score = 0;
  std::uint64_t seq = 0;
  Conditions conditions;
  /// Policy node in the owning graph; unset for free-standing values.
  std::optional<NodeRef> node;

  const ConditionSet& required(ConditionType t) const { return conditions[t]; }
  /// True when every expression in every slot is a bare Ref.
  bool is_simple() const noexcept;
};

struct ValidityReport {
  bool valid = true;
  std::set<ConditionType> missing_types;
  std::set<std::string> dangling_refs;
};

/// A policy is valid when each condition type has at least one condition
/// and every Ref resolves to a live, non-policy node of the graph.
ValidityReport validate_policy(const Graph& graph, const Policy& policy);

/// Conditions of type t, exactly as stored.
const ConditionSet& required_conditions(const Policy& policy, ConditionType t);

/// Rewrites an AND/OR policy into simple policies whose disjunction is
/// equivalent. Outputs are named "<name>#<k>" with k counting from 1, in
/// lexicographic order of (subject term, action term, object term).
/// Throws NegationNotExpandable if any expression contains Not.
std::vector<Policy> dnf_expand(const Policy& policy);

/// Owns the policies of one model and their condition edges in the graph.
class PolicyStore {
 public:
  /// Validates first and only then mutates the graph: a policy node labeled
  /// "Policy" plus, for simple policies, one condition edge per Ref.
  /// `score` defaults to 0.
  PolicyRef create_policy(Graph& graph, std::string name, Decision decision,
                          std::optional<std::int64_t> score, Conditions conditions);

  const Policy& policy(PolicyRef ref) const;
  std::optional<PolicyRef> find_policy(std::string_view name) const;
  std::optional<PolicyRef> policy_at_node(NodeRef node) const;

  ValidityReport validate_policy(const Graph& graph, PolicyRef ref) const;
  const ConditionSet& required_conditions(PolicyRef ref, ConditionType t) const;
  std::vector<Policy> dnf_expand(PolicyRef ref) const;

  std::size_t size() const noexcept { return policies_.size(); }
  std::span<const Policy> all() const noexcept { return policies_; }
  std::vector<PolicyRef> refs() const;

 private:
  std::vector<Policy> policies_;
  std::unordered_map<std::string, PolicyRef> by_name_;
  std::unordered_map<std::uint32_t, PolicyRef> by_node_;
  std::uint64_t next_seq_ = 1;
};

}  // namespace gabac
