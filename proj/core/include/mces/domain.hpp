#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mces/mixed_radix.hpp"
#include "mces/types.hpp"

namespace mces {

struct RewardRange {
  double min = 0.0;
  double max = 0.0;
  double width() const { return max - min; }
  bool contains(double r, double slack = 1e-12) const { return r >= min - slack && r <= max + slack; }
};

/// Agents, alphabets, horizon, discount and reward bounds of a team problem.
/// Immutable once constructed; the constructor validates every invariant.
class DomainSpec {
 public:
  struct Agent {
    std::vector<std::string> actions;
    std::vector<std::string> observations;
    RewardRange local_reward;

    /// Agent with generated symbol names a0.., o0...
    static Agent anonymous(std::size_t num_actions, std::size_t num_observations, RewardRange local_reward);
  };

  DomainSpec(std::vector<Agent> agents, std::size_t horizon, double discount, RewardRange global_reward);

  std::size_t num_agents() const { return agents_.size(); }
  std::size_t horizon() const { return horizon_; }
  double discount() const { return discount_; }

  std::size_t num_actions(std::size_t agent) const { return agents_.at(agent).actions.size(); }
  std::size_t num_observations(std::size_t agent) const { return agents_.at(agent).observations.size(); }

  const std::string& action_name(std::size_t agent, std::uint32_t action) const {
    return agents_.at(agent).actions.at(action);
  }
  const std::string& observation_name(std::size_t agent, std::uint32_t observation) const {
    return agents_.at(agent).observations.at(observation);
  }

  const MixedRadix& joint_actions() const { return joint_actions_; }
  const MixedRadix& joint_observations() const { return joint_observations_; }
  std::uint32_t num_joint_actions() const { return static_cast<std::uint32_t>(joint_actions_.size()); }
  std::uint32_t num_joint_observations() const {
    return static_cast<std::uint32_t>(joint_observations_.size());
  }

  std::uint32_t agent_action(JointAction a, std::size_t agent) const { return joint_actions_.digit(a.index, agent); }
  std::uint32_t agent_observation(JointObservation o, std::size_t agent) const {
    return joint_observations_.digit(o.index, agent);
  }
  JointAction encode_action(const std::vector<std::uint32_t>& per_agent) const;
  JointObservation encode_observation(const std::vector<std::uint32_t>& per_agent) const;

  RewardRange local_reward_bounds(std::size_t agent) const { return agents_.at(agent).local_reward; }
  RewardRange global_reward_bounds() const { return global_reward_; }
  /// Bounds of the summed team reward sum_i R_i + R_G.
  RewardRange team_reward_bounds() const;
  /// Bounds of one agent's reward R_i + R_G.
  RewardRange agent_reward_bounds(std::size_t agent) const;

  const std::vector<Agent>& agents() const { return agents_; }

  DomainSpec with_horizon(std::size_t horizon) const;
  DomainSpec with_discount(double discount) const;

 private:
  std::vector<Agent> agents_;
  std::size_t horizon_;
  double discount_;
  RewardRange global_reward_;
  MixedRadix joint_actions_;
  MixedRadix joint_observations_;
};

bool same_shape(const DomainSpec& a, const DomainSpec& b);

}  // namespace mces
