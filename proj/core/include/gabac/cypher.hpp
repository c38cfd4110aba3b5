#pragma once

#include <string>

#include "gabac/combiner.hpp"
#include "gabac/dsl.hpp"

namespace gabac {

/// One `create` statement per node and one `match ... merge` statement per
/// edge, in declaration order. String literals are single-quoted with
/// embedded quotes doubled.
std::string emit_cypher_data(const ModelDocument& doc);

/// One statement per policy: match the condition nodes, create the policy
/// node, merge its condition relationships. NOT/AND/OR conditions become
/// operator nodes labeled NOT, AND and OR placed between the condition
/// nodes and the policy.
std::string emit_cypher_policies(const ModelDocument& doc);

/// Three-stage decision statement (subject, object, action) bounded by
/// `[:HAS_ATTR*0..depth]`, reading names from a `$request` parameter map
/// with SUBJECT_NAME / ACTION_NAME / OBJECT_NAME keys, ending in the
/// return clause of `alg`. Supports DenyOverrides, PermitOverrides and
/// ShortestPathDenyOverrides; throws UnsupportedAlgorithm otherwise and
/// InvalidDepth for a negative depth.
std::string emit_cypher_decision_query(CombiningAlgorithm alg, int depth);

}  // namespace gabac
