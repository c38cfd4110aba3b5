#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gabac/graph.hpp"
#include "gabac/model.hpp"
#include "gabac/policy.hpp"

namespace gabac {

/// (subject, action, object) triple of query primitives.
struct AccessQuery {
  NodeRef subject;
  NodeRef action;
  NodeRef object;

  NodeRef primitive(ConditionType t) const noexcept;

  friend bool operator==(const AccessQuery&, const AccessQuery&) = default;
};

/// Resolves names to a query. Throws UnknownNode for an unknown name and
/// InvalidQuery when a name denotes a policy node.
AccessQuery resolve_query(const Graph& graph, std::string_view subject,
                          std::string_view action, std::string_view object);

/// Per-slot path lengths: HAS_ATTR hops plus the one condition edge.
using SlotLengths = std::array<int, 3>;

struct PolicyMatch {
  PolicyRef policy;
  std::string name;
  Decision decision = Decision::Permit;
  std::int64_t score = 0;
  std::uint64_t seq = 0;
  SlotLengths lengths{};
  int total_len = 0;

  int length(ConditionType t) const noexcept { return lengths[slot_index(t)]; }

  friend bool operator==(const PolicyMatch&, const PolicyMatch&) = default;
};

/// True iff c is reachable from x over 0..depth HAS_ATTR hops.
bool is_satisfied(const Graph& graph, NodeRef x, NodeRef c, int depth);

/// Recursive evaluation: Ref is is_satisfied, Not negates, And needs every
/// child, Or needs any child.
bool eval_condition_expr(const Graph& graph, NodeRef x, const ConditionExpr& expr, int depth);

/// Extended evaluator for a single policy value (simple or compound) that
/// need not be stored in a model. Every expression in every slot must hold.
/// Returns the slot lengths on a match. A slot whose true Ref leaves are all
/// absent (pure negation) contributes depth + 1.
std::optional<SlotLengths> evaluate_policy(const Graph& graph, const Policy& policy,
                                           const AccessQuery& query, int depth);

/// Every valid policy matching the query, ordered by seq.
///
/// Simple policies are found by the counting traversal: starting from each
/// query primitive's HAS_ATTR closure, follow condition edges into policy
/// nodes, count distinct satisfied conditions per policy and keep the
/// policy only when that count equals its number of required conditions of
/// the type. Stages run subject, object, action; each stage only keeps
/// survivors of the previous one. Compound policies go through the
/// recursive evaluator over the same closures.
///
/// Throws NotFrozen, UnknownNode, InvalidQuery.
std::vector<PolicyMatch> matching_policies(const Model& model, const AccessQuery& query);

/// Reference evaluation: checks every required condition of every valid
/// policy directly by enumerating HAS_ATTR paths. Same output contract as
/// matching_policies; used to cross-check it.
std::vector<PolicyMatch> matching_policies_oracle(const Model& model, const AccessQuery& query);

/// Total path length of a matching policy. Throws NotMatching otherwise.
int policy_length(const Model& model, const AccessQuery& query, PolicyRef policy);

}  // namespace gabac
