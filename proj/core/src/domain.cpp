#include "mces/domain.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <fmt/format.h>

namespace mces {

namespace {

std::vector<std::uint32_t> radices(const std::vector<DomainSpec::Agent>& agents, bool actions) {
  std::vector<std::uint32_t> out;
  out.reserve(agents.size());
  for (const auto& a : agents) out.push_back(static_cast<std::uint32_t>(actions ? a.actions.size() : a.observations.size()));
  return out;
}

void check_range(const RewardRange& r, const char* what) {
  if (!std::isfinite(r.min) || !std::isfinite(r.max) || r.min > r.max) {
    throw std::invalid_argument(fmt::format("invalid {} reward bounds [{}, {}]", what, r.min, r.max));
  }
}

}  // namespace

DomainSpec::Agent DomainSpec::Agent::anonymous(std::size_t num_actions, std::size_t num_observations,
                                               RewardRange local_reward) {
  Agent a;
  for (std::size_t k = 0; k < num_actions; ++k) a.actions.push_back(fmt::format("a{}", k));
  for (std::size_t k = 0; k < num_observations; ++k) a.observations.push_back(fmt::format("o{}", k));
  a.local_reward = local_reward;
  return a;
}

DomainSpec::DomainSpec(std::vector<Agent> agents, std::size_t horizon, double discount, RewardRange global_reward)
    : agents_(std::move(agents)), horizon_(horizon), discount_(discount), global_reward_(global_reward) {
  if (agents_.size() < 2) throw std::invalid_argument("a team needs at least two agents");
  if (horizon_ < 1) throw std::invalid_argument("horizon must be at least 1");
  if (!(discount_ > 0.0 && discount_ <= 1.0)) throw std::invalid_argument("discount must lie in (0, 1]");
  check_range(global_reward_, "global");
  for (std::size_t i = 0; i < agents_.size(); ++i) {
    const Agent& a = agents_[i];
    if (a.actions.empty()) throw std::invalid_argument(fmt::format("agent {} has no actions", i));
    if (a.observations.empty()) throw std::invalid_argument(fmt::format("agent {} has no observations", i));
    check_range(a.local_reward, "local");
  }
  joint_actions_ = MixedRadix(radices(agents_, true));
  joint_observations_ = MixedRadix(radices(agents_, false));
  if (joint_actions_.size() > std::numeric_limits<std::uint32_t>::max() ||
      joint_observations_.size() > std::numeric_limits<std::uint32_t>::max()) {
    throw std::overflow_error("joint alphabet does not fit in 32 bits");
  }
}

JointAction DomainSpec::encode_action(const std::vector<std::uint32_t>& per_agent) const {
  return JointAction{static_cast<std::uint32_t>(joint_actions_.encode(per_agent))};
}

JointObservation DomainSpec::encode_observation(const std::vector<std::uint32_t>& per_agent) const {
  return JointObservation{static_cast<std::uint32_t>(joint_observations_.encode(per_agent))};
}

RewardRange DomainSpec::team_reward_bounds() const {
  RewardRange r = global_reward_;
  for (const auto& a : agents_) {
    r.min += a.local_reward.min;
    r.max += a.local_reward.max;
  }
  return r;
}

RewardRange DomainSpec::agent_reward_bounds(std::size_t agent) const {
  const RewardRange& l = agents_.at(agent).local_reward;
  return {l.min + global_reward_.min, l.max + global_reward_.max};
}

DomainSpec DomainSpec::with_horizon(std::size_t horizon) const {
  return DomainSpec(agents_, horizon, discount_, global_reward_);
}

DomainSpec DomainSpec::with_discount(double discount) const {
  return DomainSpec(agents_, horizon_, discount, global_reward_);
}

bool same_shape(const DomainSpec& a, const DomainSpec& b) {
  if (a.num_agents() != b.num_agents() || a.horizon() != b.horizon()) return false;
  for (std::size_t i = 0; i < a.num_agents(); ++i) {
    if (a.num_actions(i) != b.num_actions(i) || a.num_observations(i) != b.num_observations(i)) return false;
  }
  return true;
}

}  // namespace mces
