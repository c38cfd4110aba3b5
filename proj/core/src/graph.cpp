#include "gabac/graph.hpp"

#include <algorithm>
#include <deque>
#include <tuple>

#include "gabac/error.hpp"

namespace gabac {
namespace {

std::uint64_t edge_key(NodeRef from, NodeRef to) {
  return (static_cast<std::uint64_t>(from.id) << 32) | to.id;
}

void erase_ref(std::vector<NodeRef>& list, NodeRef ref) {
  list.erase(std::remove(list.begin(), list.end(), ref), list.end());
}

}  // namespace

bool rel::is_condition(std::string_view rel_type) noexcept {
  return rel_type == kSubCon || rel_type == kActCon || rel_type == kObjCon;
}

bool Node::has_label(std::string_view label) const noexcept {
  return std::find(labels.begin(), labels.end(), label) != labels.end();
}

NodeRef Graph::add_node(std::string name, std::vector<std::string> labels,
                        Properties properties) {
  require_mutable();
  if (name.empty()) throw Error(Errc::EmptyName, "node name must not be empty");
  if (by_name_.contains(name)) throw Error(Errc::DuplicateName, "node '" + name + "' already exists");

  std::vector<std::string> unique_labels;
  for (auto& label : labels) {
    if (std::find(unique_labels.begin(), unique_labels.end(), label) == unique_labels.end())
      unique_labels.push_back(std::move(label));
  }
  auto has = [&](std::string_view l) {
    return std::find(unique_labels.begin(), unique_labels.end(), l) != unique_labels.end();
  };
  if (has(labels::kPrimitive) && has(labels::kPolicy))
    throw Error(Errc::InvalidNode, "node '" + name + "' cannot be both Primitive and Policy");

  NodeRef ref{static_cast<std::uint32_t>(slots_.size())};
  by_name_.emplace(name, ref);
  slots_.push_back(Slot{Node{std::move(name), std::move(unique_labels), std::move(properties)}, true});
  ++live_nodes_;
  for (auto& [type, adj] : adjacency_) {
    adj.out.resize(slots_.size());
    adj.in.resize(slots_.size());
  }
  return ref;
}

bool Graph::add_edge(NodeRef from, std::string_view rel_type, NodeRef to) {
  if (rel::is_condition(rel_type))
    throw Error(Errc::ReservedRelType,
                std::string(rel_type) + " edges are created by policy definitions");
  return insert_edge(from, rel_type, to);
}

bool Graph::insert_edge(NodeRef from, std::string_view rel_type, NodeRef to) {
  require_mutable();
  require_node(from);
  require_node(to);
  if (rel_type.empty()) throw Error(Errc::EmptyName, "relationship type must not be empty");
  if (rel_type == rel::kHasAttr && from == to)
    throw Error(Errc::SelfLoopOnHasAttr, "HAS_ATTR self-loop on '" + slots_[from.id].node.name + "'");

  auto it = adjacency_.find(rel_type);
  if (it == adjacency_.end()) {
    it = adjacency_.emplace(std::string(rel_type), Adjacency{}).first;
    it->second.out.resize(slots_.size());
    it->second.in.resize(slots_.size());
  }
  Adjacency& adj = it->second;
  if (!adj.keys.insert(edge_key(from, to)).second) return false;
  adj.out[from.id].push_back(to);
  adj.in[to.id].push_back(from);
  ++edge_count_;
  return true;
}

void Graph::remove_node(NodeRef ref) {
  require_mutable();
  require_node(ref);
  Slot& slot = slots_[ref.id];
  if (slot.node.has_label(labels::kPolicy))
    throw Error(Errc::InvalidNode, "policy node '" + slot.node.name + "' cannot be removed");

  for (auto& [type, adj] : adjacency_) {
    for (NodeRef succ : adj.out[ref.id]) {
      erase_ref(adj.in[succ.id], ref);
      adj.keys.erase(edge_key(ref, succ));
      --edge_count_;
    }
    for (NodeRef pred : adj.in[ref.id]) {
      if (pred == ref) continue;  // self edge already counted above
      erase_ref(adj.out[pred.id], ref);
      adj.keys.erase(edge_key(pred, ref));
      --edge_count_;
    }
    adj.out[ref.id].clear();
    adj.in[ref.id].clear();
  }
  by_name_.erase(slot.node.name);
  slot.live = false;
  --live_nodes_;
}

std::optional<NodeRef> Graph::find_node(std::string_view name) const {
  auto it = by_name_.find(std::string(name));
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

bool Graph::contains(NodeRef ref) const noexcept {
  return ref.id < slots_.size() && slots_[ref.id].live;
}

const Node& Graph::node(NodeRef ref) const {
  require_node(ref);
  return slots_[ref.id].node;
}

std::string Graph::node_name(NodeRef ref) const {
  if (ref.id >= slots_.size()) return "#" + std::to_string(ref.id);
  return slots_[ref.id].node.name;
}

bool Graph::has_edge(NodeRef from, std::string_view rel_type, NodeRef to) const {
  const Adjacency* adj = find_adjacency(rel_type);
  return adj != nullptr && adj->keys.contains(edge_key(from, to));
}

std::span<const NodeRef> Graph::successors(NodeRef ref, std::string_view rel_type) const {
  require_node(ref);
  const Adjacency* adj = find_adjacency(rel_type);
  if (adj == nullptr) return {};
  return adj->out[ref.id];
}

std::span<const NodeRef> Graph::predecessors(NodeRef ref, std::string_view rel_type) const {
  require_node(ref);
  const Adjacency* adj = find_adjacency(rel_type);
  if (adj == nullptr) return {};
  return adj->in[ref.id];
}

std::vector<NodeRef> Graph::nodes() const {
  std::vector<NodeRef> out;
  out.reserve(live_nodes_);
  for (std::uint32_t i = 0; i < slots_.size(); ++i)
    if (slots_[i].live) out.push_back(NodeRef{i});
  return out;
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count_);
  for (const auto& [type, adj] : adjacency_) {
    for (std::uint32_t i = 0; i < adj.out.size(); ++i)
      for (NodeRef to : adj.out[i]) out.push_back(Edge{NodeRef{i}, type, to});
  }
  std::sort(out.begin(), out.end(), [](const Edge& a, const Edge& b) {
    return std::tie(a.from, a.rel_type, a.to) < std::tie(b.from, b.rel_type, b.to);
  });
  return out;
}

std::vector<std::string> Graph::relationship_types() const {
  std::vector<std::string> out;
  for (const auto& [type, adj] : adjacency_)
    if (!adj.keys.empty()) out.push_back(type);
  return out;
}

AttributeClosure Graph::attribute_closure(NodeRef start, int max_depth) const {
  AttributeClosure out;
  for (auto [ref, hops] : attribute_closure_list(start, max_depth)) out.emplace(ref, hops);
  return out;
}

std::vector<std::pair<NodeRef, int>> Graph::attribute_closure_list(NodeRef start,
                                                                   int max_depth) const {
  require_node(start);
  if (max_depth < 0) throw Error(Errc::InvalidDepth, "closure depth must be non-negative");

  std::vector<std::pair<NodeRef, int>> order;
  order.emplace_back(start, 0);
  const Adjacency* adj = find_adjacency(rel::kHasAttr);
  if (adj == nullptr || max_depth == 0) return order;

  // Visited set sized to the closure rather than the graph keeps small
  // closures cheap on large graphs.
  std::unordered_set<std::uint32_t> seen{start.id};
  for (std::size_t head = 0; head < order.size(); ++head) {
    auto [ref, hops] = order[head];
    if (hops == max_depth) continue;
    for (NodeRef next : adj->out[ref.id]) {
      if (seen.insert(next.id).second) order.emplace_back(next, hops + 1);
    }
  }
  return order;
}

std::vector<NodeRef> Graph::find_attribute_cycle() const {
  const Adjacency* adj = find_adjacency(rel::kHasAttr);
  if (adj == nullptr) return {};

  enum class Color : std::uint8_t { White, Grey, Black };
  std::vector<Color> color(slots_.size(), Color::White);
  std::vector<NodeRef> stack_nodes;
  std::vector<std::size_t> stack_pos;

  for (std::uint32_t root = 0; root < slots_.size(); ++root) {
    if (!slots_[root].live || color[root] != Color::White) continue;
    stack_nodes.assign(1, NodeRef{root});
    stack_pos.assign(1, 0);
    color[root] = Color::Grey;
    while (!stack_nodes.empty()) {
      NodeRef top = stack_nodes.back();
      std::size_t& pos = stack_pos.back();
      const auto& succ = adj->out[top.id];
      if (pos == succ.size()) {
        color[top.id] = Color::Black;
        stack_nodes.pop_back();
        stack_pos.pop_back();
        continue;
      }
      NodeRef next = succ[pos++];
      if (color[next.id] == Color::Grey) {
        auto begin = std::find(stack_nodes.begin(), stack_nodes.end(), next);
        return {begin, stack_nodes.end()};
      }
      if (color[next.id] == Color::White) {
        color[next.id] = Color::Grey;
        stack_nodes.push_back(next);
        stack_pos.push_back(0);
      }
    }
  }
  return {};
}

int Graph::graph_attribute_depth() const {
  const Adjacency* adj = find_adjacency(rel::kHasAttr);
  if (adj == nullptr) return 0;

  // Kahn's algorithm; longest path relaxed in topological order.
  std::vector<int> indegree(slots_.size(), 0);
  for (std::uint32_t i = 0; i < slots_.size(); ++i)
    for (NodeRef to : adj->out[i]) ++indegree[to.id];

  std::deque<std::uint32_t> ready;
  for (std::uint32_t i = 0; i < slots_.size(); ++i)
    if (slots_[i].live && indegree[i] == 0) ready.push_back(i);

  std::vector<int> longest(slots_.size(), 0);
  std::size_t visited = 0;
  int best = 0;
  while (!ready.empty()) {
    std::uint32_t id = ready.front();
    ready.pop_front();
    ++visited;
    best = std::max(best, longest[id]);
    for (NodeRef to : adj->out[id]) {
      longest[to.id] = std::max(longest[to.id], longest[id] + 1);
      if (--indegree[to.id] == 0) ready.push_back(to.id);
    }
  }
  if (visited != live_nodes_) {
    auto cycle = find_attribute_cycle();
    std::string name = cycle.empty() ? std::string("?") : slots_[cycle.front().id].node.name;
    throw Error(Errc::AttributeCycle, "HAS_ATTR cycle through '" + name + "'");
  }
  return best;
}

void Graph::freeze(std::optional<int> depth_override) {
  require_mutable();
  computed_depth_ = graph_attribute_depth();
  if (depth_override) {
    if (*depth_override < computed_depth_)
      throw Error(Errc::InvalidDepth, "depth " + std::to_string(*depth_override) +
                                          " is below the graph attribute depth " +
                                          std::to_string(computed_depth_));
    attr_depth_ = *depth_override;
  } else {
    attr_depth_ = computed_depth_;
  }
  frozen_ = true;
}

void Graph::require_mutable() const {
  if (frozen_) throw Error(Errc::GraphFrozen, "graph is frozen");
}

void Graph::require_node(NodeRef ref) const {
  if (!contains(ref)) throw Error(Errc::UnknownNode, "no node with id " + std::to_string(ref.id));
}

const Graph::Adjacency* Graph::find_adjacency(std::string_view rel_type) const {
  auto it = adjacency_.find(rel_type);
  return it == adjacency_.end() ? nullptr : &it->second;
}

}  // namespace gabac
