#include "gabac/combiner.hpp"

#include <algorithm>

namespace gabac {
namespace {

std::vector<PolicyMatch> with_decision(const std::vector<PolicyMatch>& matches, Decision d) {
  std::vector<PolicyMatch> out;
  std::copy_if(matches.begin(), matches.end(), std::back_inserter(out),
               [d](const PolicyMatch& m) { return m.decision == d; });
  return out;
}

void deny_overrides(const std::vector<PolicyMatch>& considered, EvaluationResult& result) {
  auto denies = with_decision(considered, Decision::Deny);
  if (considered.empty() || !denies.empty()) {
    result.decision = Decision::Deny;
    result.deciding_policies = std::move(denies);
  } else {
    result.decision = Decision::Permit;
    result.deciding_policies = considered;
  }
}

template <typename Key>
std::vector<PolicyMatch> keep_extreme(const std::vector<PolicyMatch>& matches, Key key) {
  if (matches.empty()) return {};
  auto best = key(matches.front());
  for (const auto& m : matches) best = std::max(best, key(m));
  std::vector<PolicyMatch> out;
  std::copy_if(matches.begin(), matches.end(), std::back_inserter(out),
               [&](const PolicyMatch& m) { return key(m) == best; });
  return out;
}

}  // namespace

std::string_view to_string(CombiningAlgorithm alg) noexcept {
  switch (alg) {
    case CombiningAlgorithm::DenyOverrides: return "deny-overrides";
    case CombiningAlgorithm::PermitOverrides: return "permit-overrides";
    case CombiningAlgorithm::FirstApplicable: return "first-applicable";
    case CombiningAlgorithm::MaxScoreDenyOverrides: return "max-score-deny-overrides";
    case CombiningAlgorithm::ShortestPathDenyOverrides: return "shortest-path-deny-overrides";
  }
  return "deny-overrides";
}

std::optional<CombiningAlgorithm> parse_algorithm(std::string_view name) noexcept {
  for (CombiningAlgorithm alg : kCombiningAlgorithms)
    if (to_string(alg) == name) return alg;
  return std::nullopt;
}

EvaluationResult combine(const AccessQuery& /*query*/, std::vector<PolicyMatch> matches,
                         CombiningAlgorithm alg) {
  std::stable_sort(matches.begin(), matches.end(),
                   [](const PolicyMatch& a, const PolicyMatch& b) { return a.seq < b.seq; });
  EvaluationResult result;
  result.algorithm = alg;
  result.matches = std::move(matches);
  const auto& all = result.matches;

  switch (alg) {
    case CombiningAlgorithm::DenyOverrides:
      result.considered = all;
      deny_overrides(all, result);
      break;
    case CombiningAlgorithm::PermitOverrides: {
      result.considered = all;
      auto permits = with_decision(all, Decision::Permit);
      if (!permits.empty()) {
        result.decision = Decision::Permit;
        result.deciding_policies = std::move(permits);
      } else {
        result.decision = Decision::Deny;
        result.deciding_policies = all;
      }
      break;
    }
    case CombiningAlgorithm::FirstApplicable:
      result.considered = all;
      if (all.empty()) {
        result.decision = Decision::Deny;
      } else {
        result.decision = all.front().decision;
        result.deciding_policies = {all.front()};
      }
      break;
    case CombiningAlgorithm::MaxScoreDenyOverrides:
      result.considered = keep_extreme(all, [](const PolicyMatch& m) { return m.score; });
      deny_overrides(result.considered, result);
      break;
    case CombiningAlgorithm::ShortestPathDenyOverrides:
      result.considered = keep_extreme(all, [](const PolicyMatch& m) { return -m.total_len; });
      deny_overrides(result.considered, result);
      break;
  }
  return result;
}

EvaluationResult evaluate(const Model& model, const AccessQuery& query, CombiningAlgorithm alg) {
  return combine(query, matching_policies(model, query), alg);
}

}  // namespace gabac
