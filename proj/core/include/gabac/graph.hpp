#pragma once

#include <cstddef>
#include <cstdint>
#include <compare>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <variant>
#include <vector>

namespace gabac {

/// Dense node handle. Ids are assigned in creation order and never reused,
/// even after a node is removed during the build phase.
struct NodeRef {
  std::uint32_t id = 0;

  friend constexpr auto operator<=>(NodeRef, NodeRef) = default;
};

using PropertyValue = std::variant<std::string, std::int64_t, double, bool>;
using Properties = std::map<std::string, PropertyValue, std::less<>>;

namespace labels {
inline constexpr std::string_view kPrimitive = "Primitive";
inline constexpr std::string_view kAttribute = "Attribute";
inline constexpr std::string_view kPolicy = "Policy";
}  // namespace labels

namespace rel {
inline constexpr std::string_view kHasAttr = "HAS_ATTR";
inline constexpr std::string_view kSubCon = "SUB_CON";
inline constexpr std::string_view kActCon = "ACT_CON";
inline constexpr std::string_view kObjCon = "OBJ_CON";

/// Condition relationships are owned by the policy store.
bool is_condition(std::string_view rel_type) noexcept;
}  // namespace rel

struct Node {
  std::string name;
  std::vector<std::string> labels;  // declaration order, no duplicates
  Properties properties;

  bool has_label(std::string_view label) const noexcept;
};

struct Edge {
  NodeRef from;
  std::string rel_type;
  NodeRef to;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Node -> minimal number of HAS_ATTR hops from the closure's start node.
using AttributeClosure = std::map<NodeRef, int>;

/// In-memory directed labeled property graph.
///
/// Nodes are keyed by a unique name. Edges have set semantics per
/// (from, rel_type, to). The graph is built by a single writer and then
/// frozen; a frozen graph rejects every mutation and is safe to share
/// between reader threads.
class Graph {
 public:
  Graph() = default;

  NodeRef add_node(std::string name, std::vector<std::string> labels = {},
                   Properties properties = {});

  /// Returns true when the edge was inserted, false when the triple already
  /// existed. Condition relationships (SUB_CON/ACT_CON/OBJ_CON) are rejected
  /// with ReservedRelType: they are created through the policy store.
  bool add_edge(NodeRef from, std::string_view rel_type, NodeRef to);

  /// Build-phase removal. The id stays retired and every incident edge is
  /// dropped. Policy nodes cannot be removed.
  void remove_node(NodeRef ref);

  std::optional<NodeRef> find_node(std::string_view name) const;
  bool contains(NodeRef ref) const noexcept;
  const Node& node(NodeRef ref) const;
  /// Name of a live or removed node; "#<id>" for ids never handed out.
  std::string node_name(NodeRef ref) const;

  std::size_t node_count() const noexcept { return live_nodes_; }
  std::size_t edge_count() const noexcept { return edge_count_; }
  /// Upper bound (exclusive) on node ids handed out so far.
  std::size_t id_bound() const noexcept { return slots_.size(); }

  bool has_edge(NodeRef from, std::string_view rel_type, NodeRef to) const;
  std::span<const NodeRef> successors(NodeRef ref, std::string_view rel_type) const;
  std::span<const NodeRef> predecessors(NodeRef ref, std::string_view rel_type) const;

  /// Live node refs in id order.
  std::vector<NodeRef> nodes() const;
  /// All edges ordered by (from id, rel_type, to id).
  std::vector<Edge> edges() const;
  /// Relationship types that carry at least one edge, sorted.
  std::vector<std::string> relationship_types() const;

  /// Breadth-first closure over outgoing HAS_ATTR edges, up to max_depth hops.
  AttributeClosure attribute_closure(NodeRef start, int max_depth) const;

  /// Same closure as a (node, hops) list in non-decreasing hop order.
  std::vector<std::pair<NodeRef, int>> attribute_closure_list(NodeRef start,
                                                              int max_depth) const;

  /// Length of the longest HAS_ATTR path. Throws AttributeCycle naming a
  /// node on a cycle when the HAS_ATTR subgraph is cyclic.
  int graph_attribute_depth() const;

  /// Nodes of one HAS_ATTR cycle in path order, or empty when acyclic.
  std::vector<NodeRef> find_attribute_cycle() const;

  /// Computes the attribute depth and freezes the graph. An override may
  /// raise the depth but never lower it below the computed value.
  void freeze(std::optional<int> depth_override = std::nullopt);
  bool frozen() const noexcept { return frozen_; }

  /// Traversal bound N used by matching. Valid after freeze().
  int attr_depth() const noexcept { return attr_depth_; }
  int computed_attr_depth() const noexcept { return computed_depth_; }

 private:
  friend class PolicyStore;

  struct Slot {
    Node node;
    bool live = true;
  };

  struct Adjacency {
    std::vector<std::vector<NodeRef>> out;
    std::vector<std::vector<NodeRef>> in;
    std::unordered_set<std::uint64_t> keys;
  };

  bool insert_edge(NodeRef from, std::string_view rel_type, NodeRef to);
  void require_mutable() const;
  void require_node(NodeRef ref) const;
  const Adjacency* find_adjacency(std::string_view rel_type) const;

  std::vector<Slot> slots_;
  std::unordered_map<std::string, NodeRef> by_name_;
  std::map<std::string, Adjacency, std::less<>> adjacency_;
  std::size_t live_nodes_ = 0;
  std::size_t edge_count_ = 0;
  int attr_depth_ = 0;
  int computed_depth_ = 0;
  bool frozen_ = false;
};

}  // namespace gabac

template <>
struct std::hash<gabac::NodeRef> {
  std::size_t operator()(gabac::NodeRef ref) const noexcept {
    return std::hash<std::uint32_t>{}(ref.id);
  }
};
