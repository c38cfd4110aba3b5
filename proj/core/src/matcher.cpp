#include "gabac/matcher.hpp"

#include <algorithm>
#include <limits>
#include <unordered_map>

#include "gabac/error.hpp"

namespace gabac {
namespace {

constexpr int kUnreached = std::numeric_limits<int>::max();

using HopMap = std::unordered_map<std::uint32_t, int>;

HopMap closure_hops(const Graph& graph, NodeRef start, int depth) {
  HopMap hops;
  for (auto [ref, h] : graph.attribute_closure_list(start, depth)) hops.emplace(ref.id, h);
  return hops;
}

void check_query(const Graph& graph, const AccessQuery& query) {
  for (ConditionType t : kConditionTypes) {
    NodeRef ref = query.primitive(t);
    if (!graph.contains(ref))
      throw Error(Errc::UnknownNode, "query " + std::string(slot_keyword(t)) + " id " +
                                         std::to_string(ref.id) + " does not exist");
    if (graph.node(ref).has_label(labels::kPolicy))
      throw Error(Errc::InvalidQuery, "query " + std::string(slot_keyword(t)) + " '" +
                                          graph.node(ref).name + "' is a policy node");
  }
}

void require_frozen(const Model& model) {
  if (!model.frozen()) throw Error(Errc::NotFrozen, "model must be frozen before matching");
}

PolicyMatch make_match(PolicyRef ref, const Policy& policy, const SlotLengths& lengths) {
  PolicyMatch m;
  m.policy = ref;
  m.name = policy.name;
  m.decision = policy.decision;
  m.score = policy.score;
  m.seq = policy.seq;
  m.lengths = lengths;
  m.total_len = lengths[0] + lengths[1] + lengths[2];
  return m;
}

// Evaluates one slot given a leaf oracle returning the hop count to a
// condition node, or kUnreached. Used by both the closure-based path and
// the path-enumeration oracle so the length rule is shared, while the
// reachability answers come from independent routes.
template <typename LeafHops>
bool eval_expr(const ConditionExpr& expr, const LeafHops& leaf, int& best_leaf) {
  switch (expr.kind()) {
    case ConditionExpr::Kind::Ref: {
      const int hops = leaf(expr.node());
      if (hops == kUnreached) return false;
      best_leaf = std::min(best_leaf, hops);
      return true;
    }
    case ConditionExpr::Kind::Not:
      return !eval_expr(expr.children().front(), leaf, best_leaf);
    case ConditionExpr::Kind::And: {
      bool all = true;
      // Visit every child so each true leaf contributes to the length.
      for (const auto& child : expr.children()) all = eval_expr(child, leaf, best_leaf) && all;
      return all;
    }
    case ConditionExpr::Kind::Or: {
      bool any = false;
      for (const auto& child : expr.children()) any = eval_expr(child, leaf, best_leaf) || any;
      return any;
    }
  }
  return false;
}

template <typename LeafHopsFor>
std::optional<SlotLengths> eval_policy(const Policy& policy, int depth, const LeafHopsFor& leaf_for) {
  SlotLengths lengths{};
  for (ConditionType t : kConditionTypes) {
    const ConditionSet& set = policy.conditions[t];
    if (set.empty()) return std::nullopt;
    const auto leaf = leaf_for(t);
    int best = kUnreached;
    for (const auto& expr : set)
      if (!eval_expr(expr, leaf, best)) return std::nullopt;
    lengths[slot_index(t)] = best == kUnreached ? depth + 1 : best + 1;
  }
  return lengths;
}

// Minimal path length from x to c over at most `remaining` HAS_ATTR hops,
// by enumerating every path.
void enumerate_paths(const Graph& graph, NodeRef x, NodeRef c, int length, int remaining,
                     int& best) {
  if (x == c) best = std::min(best, length);
  if (remaining == 0) return;
  for (NodeRef next : graph.successors(x, rel::kHasAttr))
    enumerate_paths(graph, next, c, length + 1, remaining - 1, best);
}

int path_enumeration_hops(const Graph& graph, NodeRef x, NodeRef c, int depth) {
  if (!graph.contains(c)) return kUnreached;
  int best = kUnreached;
  enumerate_paths(graph, x, c, 0, depth, best);
  return best;
}

}  // namespace

NodeRef AccessQuery::primitive(ConditionType t) const noexcept {
  switch (t) {
    case ConditionType::Subject: return subject;
    case ConditionType::Action: return action;
    case ConditionType::Object: return object;
  }
  return subject;
}

AccessQuery resolve_query(const Graph& graph, std::string_view subject, std::string_view action,
                          std::string_view object) {
  auto lookup = [&](std::string_view name, ConditionType t) {
    auto ref = graph.find_node(name);
    if (!ref)
      throw Error(Errc::UnknownNode,
                  "unknown " + std::string(slot_keyword(t)) + " '" + std::string(name) + "'");
    if (graph.node(*ref).has_label(labels::kPolicy))
      throw Error(Errc::InvalidQuery, std::string(slot_keyword(t)) + " '" + std::string(name) +
                                          "' is a policy node");
    return *ref;
  };
  return AccessQuery{lookup(subject, ConditionType::Subject), lookup(action, ConditionType::Action),
                     lookup(object, ConditionType::Object)};
}

bool is_satisfied(const Graph& graph, NodeRef x, NodeRef c, int depth) {
  if (!graph.contains(c)) throw Error(Errc::UnknownNode, "unknown condition node");
  for (auto [ref, hops] : graph.attribute_closure_list(x, depth))
    if (ref == c) return true;
  return false;
}

bool eval_condition_expr(const Graph& graph, NodeRef x, const ConditionExpr& expr, int depth) {
  const HopMap hops = closure_hops(graph, x, depth);
  auto leaf = [&](NodeRef c) {
    auto it = hops.find(c.id);
    return it == hops.end() ? kUnreached : it->second;
  };
  int best = kUnreached;
  return eval_expr(expr, leaf, best);
}

std::optional<SlotLengths> evaluate_policy(const Graph& graph, const Policy& policy,
                                           const AccessQuery& query, int depth) {
  check_query(graph, query);
  std::array<HopMap, 3> closures;
  for (ConditionType t : kConditionTypes)
    closures[slot_index(t)] = closure_hops(graph, query.primitive(t), depth);
  return eval_policy(policy, depth, [&](ConditionType t) {
    const HopMap& hops = closures[slot_index(t)];
    return [&hops](NodeRef c) {
      auto it = hops.find(c.id);
      return it == hops.end() ? kUnreached : it->second;
    };
  });
}

std::vector<PolicyMatch> matching_policies(const Model& model, const AccessQuery& query) {
  require_frozen(model);
  const Graph& graph = model.graph();
  check_query(graph, query);
  const int depth = model.attr_depth();

  std::array<std::vector<std::pair<NodeRef, int>>, 3> closures;
  for (ConditionType t : kConditionTypes)
    closures[slot_index(t)] = graph.attribute_closure_list(query.primitive(t), depth);

  // policy node id -> slot lengths accumulated so far
  std::unordered_map<std::uint32_t, SlotLengths> survivors;
  bool first_stage = true;
  for (ConditionType t : {ConditionType::Subject, ConditionType::Object, ConditionType::Action}) {
    const std::string_view con = relationship_name(t);
    struct Tally {
      int satisfied = 0;
      int min_hops = kUnreached;
    };
    std::unordered_map<std::uint32_t, Tally> tally;
    for (auto [sc, hops] : closures[slot_index(t)]) {
      for (NodeRef pol : graph.successors(sc, con)) {
        if (!first_stage && !survivors.contains(pol.id)) continue;
        Tally& entry = tally[pol.id];
        ++entry.satisfied;
        entry.min_hops = std::min(entry.min_hops, hops);
      }
    }
    std::unordered_map<std::uint32_t, SlotLengths> next;
    for (const auto& [pol_id, entry] : tally) {
      const auto required = graph.predecessors(NodeRef{pol_id}, con).size();
      if (static_cast<std::size_t>(entry.satisfied) != required) continue;
      SlotLengths lengths = first_stage ? SlotLengths{} : survivors.at(pol_id);
      lengths[slot_index(t)] = entry.min_hops + 1;
      next.emplace(pol_id, lengths);
    }
    survivors = std::move(next);
    first_stage = false;
    if (survivors.empty()) break;
  }

  const PolicyStore& store = model.policies();
  std::vector<PolicyMatch> out;
  for (const auto& [pol_id, lengths] : survivors) {
    auto ref = store.policy_at_node(NodeRef{pol_id});
    if (!ref || !model.is_valid(*ref)) continue;
    out.push_back(make_match(*ref, store.policy(*ref), lengths));
  }

  if (!model.compound_policies().empty()) {
    std::array<HopMap, 3> hop_maps;
    for (ConditionType t : kConditionTypes)
      for (auto [ref, hops] : closures[slot_index(t)]) hop_maps[slot_index(t)].emplace(ref.id, hops);
    for (PolicyRef ref : model.compound_policies()) {
      const Policy& policy = store.policy(ref);
      auto lengths = eval_policy(policy, depth, [&](ConditionType t) {
        const HopMap& hops = hop_maps[slot_index(t)];
        return [&hops](NodeRef c) {
          auto it = hops.find(c.id);
          return it == hops.end() ? kUnreached : it->second;
        };
      });
      if (lengths) out.push_back(make_match(ref, policy, *lengths));
    }
  }

  std::sort(out.begin(), out.end(),
            [](const PolicyMatch& a, const PolicyMatch& b) { return a.seq < b.seq; });
  return out;
}

std::vector<PolicyMatch> matching_policies_oracle(const Model& model, const AccessQuery& query) {
  require_frozen(model);
  const Graph& graph = model.graph();
  check_query(graph, query);
  const int depth = model.attr_depth();

  const PolicyStore& store = model.policies();
  std::vector<PolicyMatch> out;
  for (PolicyRef ref : store.refs()) {
    const Policy& policy = store.policy(ref);
    if (!validate_policy(graph, policy).valid) continue;
    auto lengths = eval_policy(policy, depth, [&](ConditionType t) {
      const NodeRef x = query.primitive(t);
      return [&graph, x, depth](NodeRef c) { return path_enumeration_hops(graph, x, c, depth); };
    });
    if (lengths) out.push_back(make_match(ref, policy, *lengths));
  }
  std::sort(out.begin(), out.end(),
            [](const PolicyMatch& a, const PolicyMatch& b) { return a.seq < b.seq; });
  return out;
}

int policy_length(const Model& model, const AccessQuery& query, PolicyRef ref) {
  require_frozen(model);
  const Policy& policy = model.policies().policy(ref);
  if (!model.is_valid(ref))
    throw Error(Errc::NotMatching, "policy '" + policy.name + "' is invalid");
  auto lengths = evaluate_policy(model.graph(), policy, query, model.attr_depth());
  if (!lengths) throw Error(Errc::NotMatching, "policy '" + policy.name + "' does not match");
  return (*lengths)[0] + (*lengths)[1] + (*lengths)[2];
}

}  // namespace gabac
