#include <gtest/gtest.h>

#include <algorithm>
#include <limits>
#include <set>
#include <tuple>

#include "random_model.hpp"

using namespace gabac;
using gabac::testing::node_named;
using gabac::testing::Rng;

namespace {

Errc error_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no gabac::Error thrown";
  return Errc::IoError;
}

Graph healthcare_graph() {
  Graph g;
  gabac::testing::add_healthcare_data(g);
  return g;
}

// Shortest HAS_ATTR distance by enumerating every simple path.
void enumerate(const Graph& g, NodeRef at, int hops, std::set<NodeRef>& on_path,
               std::map<NodeRef, int>& best) {
  auto it = best.find(at);
  if (it == best.end() || hops < it->second) best[at] = hops;
  for (NodeRef next : g.successors(at, rel::kHasAttr)) {
    if (on_path.count(next)) continue;
    on_path.insert(next);
    enumerate(g, next, hops + 1, on_path, best);
    on_path.erase(next);
  }
}

std::map<NodeRef, int> dfs_distances(const Graph& g, NodeRef start, int max_depth) {
  std::map<NodeRef, int> best;
  std::set<NodeRef> on_path{start};
  enumerate(g, start, 0, on_path, best);
  std::erase_if(best, [&](const auto& kv) { return kv.second > max_depth; });
  return best;
}

int longest_path_from(const Graph& g, NodeRef at) {
  int best = 0;
  for (NodeRef next : g.successors(at, rel::kHasAttr)) best = std::max(best, 1 + longest_path_from(g, next));
  return best;
}

// Random DAG over at most 12 nodes: edges only from lower to higher index.
Graph small_dag(Rng& rng) {
  Graph g;
  const int n = std::uniform_int_distribution<int>(1, 12)(rng);
  for (int i = 0; i < n; ++i) g.add_node("v" + std::to_string(i));
  std::bernoulli_distribution edge(0.25);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (edge(rng)) g.add_edge(NodeRef{static_cast<std::uint32_t>(i)}, rel::kHasAttr,
                                NodeRef{static_cast<std::uint32_t>(j)});
  return g;
}

}  // namespace

TEST(GraphAddNode, CreatesFindableNode) {
  Graph g;
  NodeRef peter = g.add_node("Peter", {"Subject", "User", "Primitive"});
  ASSERT_EQ(g.find_node("Peter"), peter);
  EXPECT_EQ(g.node(peter).labels, (std::vector<std::string>{"Subject", "User", "Primitive"}));
  EXPECT_TRUE(g.node(peter).has_label("Primitive"));
  EXPECT_EQ(g.node_count(), 1u);
}

TEST(GraphAddNode, RejectsDuplicateAndEmptyNames) {
  Graph g;
  g.add_node("Peter", {"Subject"});
  EXPECT_EQ(error_of([&] { g.add_node("Peter", {"Subject"}); }), Errc::DuplicateName);
  EXPECT_EQ(error_of([&] { g.add_node(""); }), Errc::EmptyName);
  EXPECT_EQ(g.node_count(), 1u);
}

TEST(GraphAddNode, RejectsPrimitivePolicyLabelPair) {
  Graph g;
  EXPECT_EQ(error_of([&] { g.add_node("X", {"Primitive", "Policy"}); }), Errc::InvalidNode);
  EXPECT_FALSE(g.find_node("X"));
}

TEST(GraphAddNode, KeepsProperties) {
  Graph g;
  NodeRef n = g.add_node("Doc", {"Object"}, {{"pages", std::int64_t{12}}, {"draft", true}});
  EXPECT_EQ(std::get<std::int64_t>(g.node(n).properties.at("pages")), 12);
  EXPECT_TRUE(std::get<bool>(g.node(n).properties.at("draft")));
}

TEST(GraphAddEdge, IdempotentInsert) {
  Graph g = healthcare_graph();
  NodeRef joe = node_named(g, "Joe");
  NodeRef staff = node_named(g, "Hospital Staff");
  const std::size_t before = g.edge_count();
  EXPECT_FALSE(g.add_edge(joe, rel::kHasAttr, staff));
  EXPECT_EQ(g.edge_count(), before);
  EXPECT_TRUE(g.has_edge(joe, rel::kHasAttr, staff));
}

TEST(GraphAddEdge, Errors) {
  Graph g = healthcare_graph();
  NodeRef read = node_named(g, "Read");
  EXPECT_EQ(error_of([&] { g.add_edge(read, rel::kHasAttr, read); }), Errc::SelfLoopOnHasAttr);
  EXPECT_EQ(error_of([&] { g.add_edge(read, rel::kHasAttr, NodeRef{999}); }), Errc::UnknownNode);
  EXPECT_EQ(error_of([&] { g.add_edge(NodeRef{999}, "OWNER_OF", read); }), Errc::UnknownNode);
  EXPECT_EQ(error_of([&] { g.add_edge(read, rel::kSubCon, node_named(g, "Doctor")); }),
            Errc::ReservedRelType);
  // A self loop is fine for other relationship types.
  EXPECT_TRUE(g.add_edge(read, "RELATED_TO", read));
}

TEST(GraphFindNode, CaseSensitiveLookup) {
  Graph g = healthcare_graph();
  EXPECT_TRUE(g.find_node("MR_1234"));
  EXPECT_EQ(g.node(*g.find_node("MR_1234")).name, "MR_1234");
  EXPECT_FALSE(g.find_node("mr_1234"));
  EXPECT_FALSE(g.find_node("Ghost"));
}

TEST(GraphClosure, RecordChain) {
  Graph g = healthcare_graph();
  NodeRef rec = node_named(g, "MR_1234");
  NodeRef pmr = node_named(g, "Peter's Medical Records");
  NodeRef hr = node_named(g, "Hospital Records");
  EXPECT_EQ(g.attribute_closure(rec, 5), (AttributeClosure{{rec, 0}, {pmr, 1}, {hr, 2}}));
  EXPECT_EQ(g.attribute_closure(rec, 0), (AttributeClosure{{rec, 0}}));
  EXPECT_EQ(g.attribute_closure(rec, 1), (AttributeClosure{{rec, 0}, {pmr, 1}}));
}

TEST(GraphClosure, IgnoresOtherRelationships) {
  Graph g = healthcare_graph();
  NodeRef peter = node_named(g, "Peter");
  auto closure = g.attribute_closure(peter, 5);
  EXPECT_EQ(closure.size(), 2u);
  EXPECT_FALSE(closure.count(node_named(g, "Peter's Medical Records")));
}

TEST(GraphClosure, Errors) {
  Graph g = healthcare_graph();
  EXPECT_EQ(error_of([&] { g.attribute_closure(NodeRef{500}, 1); }), Errc::UnknownNode);
  EXPECT_EQ(error_of([&] { g.attribute_closure(node_named(g, "Sue"), -1); }), Errc::InvalidDepth);
}

TEST(GraphDepth, Examples) {
  EXPECT_EQ(healthcare_graph().graph_attribute_depth(), 2);

  Graph flat;
  flat.add_node("a");
  flat.add_node("b");
  flat.add_edge(NodeRef{0}, "KNOWS", NodeRef{1});
  EXPECT_EQ(flat.graph_attribute_depth(), 0);
  EXPECT_EQ(Graph{}.graph_attribute_depth(), 0);
}

TEST(GraphDepth, CycleIsReported) {
  Graph g;
  NodeRef a = g.add_node("A");
  NodeRef b = g.add_node("B");
  g.add_edge(a, rel::kHasAttr, b);
  g.add_edge(b, rel::kHasAttr, a);
  try {
    g.graph_attribute_depth();
    FAIL() << "expected AttributeCycle";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::AttributeCycle);
    const std::string what = e.what();
    EXPECT_TRUE(what.find('A') != std::string::npos || what.find('B') != std::string::npos);
  }
  auto cycle = g.find_attribute_cycle();
  EXPECT_EQ(cycle.size(), 2u);
  EXPECT_EQ(error_of([&] { g.freeze(); }), Errc::AttributeCycle);
  EXPECT_FALSE(g.frozen());
}

TEST(GraphFreeze, RejectsMutationAfterFreeze) {
  Graph g = healthcare_graph();
  g.freeze();
  EXPECT_TRUE(g.frozen());
  EXPECT_EQ(g.attr_depth(), 2);
  EXPECT_EQ(error_of([&] { g.add_node("New"); }), Errc::GraphFrozen);
  EXPECT_EQ(error_of([&] { g.add_edge(NodeRef{0}, "X", NodeRef{1}); }), Errc::GraphFrozen);
  EXPECT_EQ(error_of([&] { g.remove_node(NodeRef{0}); }), Errc::GraphFrozen);
}

TEST(GraphFreeze, DepthOverride) {
  Graph up = healthcare_graph();
  up.freeze(5);
  EXPECT_EQ(up.attr_depth(), 5);
  EXPECT_EQ(up.computed_attr_depth(), 2);

  Graph down = healthcare_graph();
  EXPECT_EQ(error_of([&] { down.freeze(1); }), Errc::InvalidDepth);
  EXPECT_FALSE(down.frozen());
}

TEST(GraphRemoveNode, DropsEdgesAndRetiresId) {
  Graph g = healthcare_graph();
  NodeRef staff = node_named(g, "Hospital Staff");
  const std::size_t edges = g.edge_count();
  g.remove_node(staff);
  EXPECT_FALSE(g.contains(staff));
  EXPECT_FALSE(g.find_node("Hospital Staff"));
  EXPECT_EQ(g.node_name(staff), "Hospital Staff");
  EXPECT_EQ(g.edge_count(), edges - 2);
  EXPECT_EQ(error_of([&] { g.predecessors(staff, rel::kHasAttr); }), Errc::UnknownNode);
  for (const char* name : {"John", "Joe"}) {
    auto succ = g.successors(node_named(g, name), rel::kHasAttr);
    EXPECT_EQ(std::find(succ.begin(), succ.end(), staff), succ.end()) << name;
  }
  NodeRef again = g.add_node("Hospital Staff");
  EXPECT_NE(again, staff);
  EXPECT_GE(again.id, g.id_bound() - 1);
}

TEST(GraphEdges, SortedAndTyped) {
  Graph g = healthcare_graph();
  auto edges = g.edges();
  EXPECT_EQ(edges.size(), 14u);
  EXPECT_TRUE(std::is_sorted(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    return std::tie(a.from, a.rel_type, a.to) < std::tie(b.from, b.rel_type, b.to);
  }));
  EXPECT_EQ(g.relationship_types(), (std::vector<std::string>{"HAS_ATTR", "OWNER_OF"}));
}

TEST(GraphProperty, ClosureMonotoneInDepth) {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    Graph g = small_dag(rng);
    for (NodeRef x : g.nodes()) {
      EXPECT_EQ(g.attribute_closure(x, 0), (AttributeClosure{{x, 0}}));
      for (int d = 0; d < 6; ++d) {
        auto lo = g.attribute_closure(x, d);
        auto hi = g.attribute_closure(x, d + 1);
        for (auto [n, hops] : lo) {
          ASSERT_TRUE(hi.count(n));
          EXPECT_EQ(hi.at(n), hops);
        }
      }
    }
  }
}

TEST(GraphProperty, ClosureMatchesPathEnumeration) {
  Rng rng(12);
  for (int trial = 0; trial < 300; ++trial) {
    Graph g = small_dag(rng);
    const int depth = std::uniform_int_distribution<int>(0, 12)(rng);
    for (NodeRef x : g.nodes()) {
      auto oracle = dfs_distances(g, x, depth);
      AttributeClosure expected(oracle.begin(), oracle.end());
      ASSERT_EQ(g.attribute_closure(x, depth), expected);

      auto list = g.attribute_closure_list(x, depth);
      EXPECT_EQ(AttributeClosure(list.begin(), list.end()), expected);
      EXPECT_TRUE(std::is_sorted(list.begin(), list.end(),
                                 [](const auto& a, const auto& b) { return a.second < b.second; }));
    }
  }
}

TEST(GraphProperty, DepthIsLargestClosureHop) {
  Rng rng(13);
  for (int trial = 0; trial < 300; ++trial) {
    Graph g = small_dag(rng);
    const int n = static_cast<int>(g.node_count());
    int max_hop = 0;
    int longest = 0;
    for (NodeRef x : g.nodes()) {
      for (auto [_, hops] : g.attribute_closure(x, n)) max_hop = std::max(max_hop, hops);
      longest = std::max(longest, longest_path_from(g, x));
    }
    EXPECT_EQ(g.graph_attribute_depth(), longest);
    // Depth is the longest chain; closure hops are shortest distances, so
    // they can only be smaller or equal.
    EXPECT_LE(max_hop, g.graph_attribute_depth());
  }
}

TEST(GraphProperty, DepthEqualsLongestShortestPathOnChains) {
  // On graphs where every node pair has at most one path the two notions
  // coincide exactly.
  Rng rng(14);
  for (int trial = 0; trial < 100; ++trial) {
    Graph g;
    const int n = std::uniform_int_distribution<int>(1, 12)(rng);
    for (int i = 0; i < n; ++i) g.add_node("t" + std::to_string(i));
    for (int i = 1; i < n; ++i) {
      const int parent = std::uniform_int_distribution<int>(0, i - 1)(rng);
      g.add_edge(NodeRef{static_cast<std::uint32_t>(i)}, rel::kHasAttr,
                 NodeRef{static_cast<std::uint32_t>(parent)});
    }
    int max_hop = 0;
    for (NodeRef x : g.nodes())
      for (auto [_, hops] : g.attribute_closure(x, n)) max_hop = std::max(max_hop, hops);
    EXPECT_EQ(g.graph_attribute_depth(), max_hop);
  }
}

TEST(GraphProperty, EdgeSetSemantics) {
  Rng rng(15);
  const std::vector<std::string> types{"HAS_ATTR", "OWNER_OF", "MEMBER"};
  for (int trial = 0; trial < 100; ++trial) {
    Graph g;
    for (int i = 0; i < 8; ++i) g.add_node("v" + std::to_string(i));
    std::set<std::tuple<std::uint32_t, std::string, std::uint32_t>> expected;
    std::uniform_int_distribution<std::uint32_t> node(0, 7);
    std::uniform_int_distribution<std::size_t> type(0, types.size() - 1);
    for (int k = 0; k < 60; ++k) {
      std::uint32_t a = node(rng);
      std::uint32_t b = node(rng);
      const std::string& t = types[type(rng)];
      if (t == "HAS_ATTR" && a >= b) continue;  // keep it acyclic and loop-free
      const bool inserted = g.add_edge(NodeRef{a}, t, NodeRef{b});
      EXPECT_EQ(inserted, expected.emplace(a, t, b).second);
    }
    auto edges = g.edges();
    EXPECT_EQ(edges.size(), expected.size());
    EXPECT_EQ(g.edge_count(), expected.size());
    for (std::size_t i = 1; i < edges.size(); ++i) EXPECT_FALSE(edges[i] == edges[i - 1]);
  }
}
