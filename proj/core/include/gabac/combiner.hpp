#pragma once

#include <array>
#include <optional>
#include <string_view>
#include <vector>

#include "gabac/matcher.hpp"
#include "gabac/model.hpp"
#include "gabac/policy.hpp"

namespace gabac {

enum class CombiningAlgorithm {
  DenyOverrides,
  PermitOverrides,
  FirstApplicable,
  MaxScoreDenyOverrides,
  ShortestPathDenyOverrides,
};

inline constexpr std::array<CombiningAlgorithm, 5> kCombiningAlgorithms{
    CombiningAlgorithm::DenyOverrides, CombiningAlgorithm::PermitOverrides,
    CombiningAlgorithm::FirstApplicable, CombiningAlgorithm::MaxScoreDenyOverrides,
    CombiningAlgorithm::ShortestPathDenyOverrides};

/// Configuration name, e.g. "deny-overrides".
std::string_view to_string(CombiningAlgorithm alg) noexcept;
std::optional<CombiningAlgorithm> parse_algorithm(std::string_view name) noexcept;

struct EvaluationResult {
  Decision decision = Decision::Deny;
  CombiningAlgorithm algorithm = CombiningAlgorithm::DenyOverrides;
  std::vector<PolicyMatch> matches;
  /// Matches left after the algorithm's restriction step (max score,
  /// min length); equal to `matches` for the other algorithms.
  std::vector<PolicyMatch> considered;
  /// Matches that determined the outcome.
  std::vector<PolicyMatch> deciding_policies;
};

/// Reduces matches (ordered by seq) to a decision. Empty input is Deny for
/// every algorithm.
EvaluationResult combine(const AccessQuery& query, std::vector<PolicyMatch> matches,
                         CombiningAlgorithm alg);

/// combine(query, matching_policies(model, query), alg).
EvaluationResult evaluate(const Model& model, const AccessQuery& query, CombiningAlgorithm alg);

}  // namespace gabac
