#include "gabac/model.hpp"

#include "gabac/error.hpp"

namespace gabac {

PolicyRef Model::create_policy(std::string name, Decision decision,
                               std::optional<std::int64_t> score, Conditions conditions) {
  return policies_.create_policy(graph_, std::move(name), decision, score, std::move(conditions));
}

void Model::freeze(std::optional<int> depth_override) {
  graph_.freeze(depth_override);
  valid_.clear();
  valid_.reserve(policies_.size());
  compound_.clear();
  for (PolicyRef ref : policies_.refs()) {
    const bool valid = policies_.validate_policy(graph_, ref).valid;
    valid_.push_back(valid);
    if (valid && !policies_.policy(ref).is_simple()) compound_.push_back(ref);
  }
}

bool Model::is_valid(PolicyRef ref) const {
  if (!frozen()) throw Error(Errc::NotFrozen, "model is not frozen");
  if (ref.index >= valid_.size())
    throw Error(Errc::UnknownPolicy, "no policy with index " + std::to_string(ref.index));
  return valid_[ref.index];
}

}  // namespace gabac
