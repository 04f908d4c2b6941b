#include "mces/trajectory.hpp"

#include <stdexcept>

namespace mces {

Trajectory::Trajectory(std::size_t num_agents, std::vector<JointAction> actions, std::vector<double> local_rewards,
                       std::vector<double> global_rewards, std::vector<JointObservation> observations)
    : num_agents_(num_agents),
      actions_(std::move(actions)),
      local_rewards_(std::move(local_rewards)),
      global_rewards_(std::move(global_rewards)),
      observations_(std::move(observations)) {
  const std::size_t T = actions_.size();
  if (T == 0 || num_agents_ == 0) throw std::invalid_argument("trajectory needs at least one step and one agent");
  if (local_rewards_.size() != T * num_agents_ || global_rewards_.size() != T || observations_.size() != T - 1) {
    throw std::invalid_argument("trajectory records have inconsistent lengths");
  }
}

double Trajectory::team_reward(std::size_t t) const {
  double sum = 0.0;
  for (std::size_t i = 0; i < num_agents_; ++i) sum += local_rewards_[t * num_agents_ + i];
  return sum + global_rewards_[t];
}

void Trajectory::clear(std::size_t num_agents) {
  num_agents_ = num_agents;
  actions_.clear();
  local_rewards_.clear();
  global_rewards_.clear();
  observations_.clear();
}

void Trajectory::append(JointAction action, std::span<const double> local_rewards, double global_reward) {
  actions_.push_back(action);
  local_rewards_.insert(local_rewards_.end(), local_rewards.begin(), local_rewards.end());
  global_rewards_.push_back(global_reward);
}

namespace {

double step_reward(const Trajectory& tr, std::size_t t, std::optional<std::size_t> agent) {
  return agent ? tr.local_reward(t, *agent) + tr.global_reward(t) : tr.team_reward(t);
}

double discounted(const Trajectory& tr, std::size_t begin, std::size_t end, double discount,
                  std::optional<std::size_t> agent) {
  double weight = 1.0;
  for (std::size_t t = 0; t < begin; ++t) weight *= discount;
  double sum = 0.0;
  for (std::size_t t = begin; t < end; ++t) {
    sum += weight * step_reward(tr, t, agent);
    weight *= discount;
  }
  return sum;
}

}  // namespace

double trajectory_return(const Trajectory& trajectory, double discount, std::optional<std::size_t> agent) {
  return discounted(trajectory, 0, trajectory.horizon(), discount, agent);
}

bool has_prefix(const Trajectory& trajectory, const JointObservationSeq& prefix) {
  if (prefix.size() > trajectory.observations().size()) return false;
  for (std::size_t t = 0; t < prefix.size(); ++t) {
    if (trajectory.observation(t) != prefix[t]) return false;
  }
  return true;
}

std::optional<double> post_obs_return(const Trajectory& trajectory, const JointObservationSeq& prefix, double discount,
                                      std::optional<std::size_t> agent) {
  if (!has_prefix(trajectory, prefix)) return std::nullopt;
  return discounted(trajectory, prefix.size(), trajectory.horizon(), discount, agent);
}

std::optional<double> pre_obs_return(const Trajectory& trajectory, const JointObservationSeq& prefix, double discount,
                                     std::optional<std::size_t> agent) {
  if (!has_prefix(trajectory, prefix)) return std::nullopt;
  return discounted(trajectory, 0, prefix.size(), discount, agent);
}

double tail_return(const Trajectory& trajectory, std::size_t depth, double discount,
                   std::optional<std::size_t> agent) {
  return discounted(trajectory, depth, trajectory.horizon(), discount, agent);
}

}  // namespace mces
