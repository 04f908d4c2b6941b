#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mces/types.hpp"

namespace mces {

/// T steps of (joint action, factored rewards) with the T-1 joint
/// observations received between them. The global reward is stored once per
/// step, so it is the same in every agent's reward tuple by construction.
class Trajectory {
 public:
  Trajectory() = default;

  /// `local_rewards` is step-major: entry t * Z + i is agent i's local reward
  /// at step t. Throws std::invalid_argument on inconsistent lengths.
  Trajectory(std::size_t num_agents, std::vector<JointAction> actions, std::vector<double> local_rewards,
             std::vector<double> global_rewards, std::vector<JointObservation> observations);

  std::size_t horizon() const { return actions_.size(); }
  std::size_t num_agents() const { return num_agents_; }

  JointAction action(std::size_t t) const { return actions_[t]; }
  /// Joint observation received after step t (t < T-1).
  JointObservation observation(std::size_t t) const { return observations_[t]; }
  std::span<const JointObservation> observations() const { return observations_; }

  double local_reward(std::size_t t, std::size_t agent) const { return local_rewards_[t * num_agents_ + agent]; }
  double global_reward(std::size_t t) const { return global_rewards_[t]; }
  RewardTuple reward(std::size_t t, std::size_t agent) const { return {local_reward(t, agent), global_reward(t)}; }
  /// sum_i r_i^t + r_G^t
  double team_reward(std::size_t t) const;

  /// Starts an in-place rebuild that keeps allocated capacity. Used by the
  /// samplers; append() must then be called exactly T times.
  void clear(std::size_t num_agents);
  void append(JointAction action, std::span<const double> local_rewards, double global_reward);
  void append_observation(JointObservation observation) { observations_.push_back(observation); }

  friend bool operator==(const Trajectory&, const Trajectory&) = default;

 private:
  std::size_t num_agents_ = 0;
  std::vector<JointAction> actions_;
  std::vector<double> local_rewards_;
  std::vector<double> global_rewards_;
  std::vector<JointObservation> observations_;
};

/// Discounted return. Without an agent: the team return
/// sum_t g^t (sum_i r_i^t + r_G^t). With agent i: sum_t g^t (r_i^t + r_G^t).
double trajectory_return(const Trajectory& trajectory, double discount, std::optional<std::size_t> agent = {});

/// Whether the trajectory's observations begin with `prefix`.
bool has_prefix(const Trajectory& trajectory, const JointObservationSeq& prefix);

/// Discounted rewards of steps t..T-1 where t = |prefix|, keeping the global
/// discount exponent (g^t at the first post step). nullopt when the
/// trajectory's observation history does not start with `prefix`.
std::optional<double> post_obs_return(const Trajectory& trajectory, const JointObservationSeq& prefix, double discount,
                                      std::optional<std::size_t> agent = {});

/// Discounted rewards of steps 0..|prefix|-1; nullopt as above.
std::optional<double> pre_obs_return(const Trajectory& trajectory, const JointObservationSeq& prefix, double discount,
                                     std::optional<std::size_t> agent = {});

/// post_obs_return starting at step `depth`, skipping the prefix test.
double tail_return(const Trajectory& trajectory, std::size_t depth, double discount,
                   std::optional<std::size_t> agent = {});

}  // namespace mces
