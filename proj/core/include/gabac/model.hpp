#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gabac/graph.hpp"
#include "gabac/policy.hpp"

namespace gabac {

/// A graph together with the policies defined over it.
///
/// Build with graph() and create_policy(), then freeze(). A frozen model is
/// immutable and may be evaluated from any number of threads.
class Model {
 public:
  Graph& graph() noexcept { return graph_; }
  const Graph& graph() const noexcept { return graph_; }
  const PolicyStore& policies() const noexcept { return policies_; }

  PolicyRef create_policy(std::string name, Decision decision,
                          std::optional<std::int64_t> score, Conditions conditions);

  /// Freezes the graph (see Graph::freeze) and caches per-policy validity.
  void freeze(std::optional<int> depth_override = std::nullopt);
  bool frozen() const noexcept { return graph_.frozen(); }

  int attr_depth() const noexcept { return graph_.attr_depth(); }

  /// Validity as of freeze(); policies can only become invalid through
  /// build-phase node removal.
  bool is_valid(PolicyRef ref) const;

  /// Valid policies with at least one non-Ref condition, in seq order.
  const std::vector<PolicyRef>& compound_policies() const noexcept { return compound_; }

 private:
  Graph graph_;
  PolicyStore policies_;
  std::vector<bool> valid_;
  std::vector<PolicyRef> compound_;
};

}  // namespace gabac
