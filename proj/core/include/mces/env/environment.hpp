#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mces/domain.hpp"
#include "mces/rng.hpp"
#include "mces/types.hpp"

namespace mces::env {

using State = std::uint32_t;

/// Callable description of a finite team model, consumed once by the
/// Environment constructor which tabulates and validates it.
struct ModelDefinition {
  DomainSpec spec;
  std::vector<std::string> state_names;
  std::vector<double> initial;  // one probability per state
  /// Successor distribution of (s, a) as (s', p) pairs; zero entries may be omitted.
  std::function<std::vector<std::pair<State, double>>(State, JointAction)> transition;
  /// Dense distribution over joint observations given (s', a).
  std::function<std::vector<double>(State, JointAction)> observation;
  /// R_i(s, a_i); agent is 0-based here.
  std::function<double(State, std::size_t, std::uint32_t)> local_reward;
  /// R_G(s, a)
  std::function<double(State, JointAction)> global_reward;
};

struct StepResult {
  State next;
  JointObservation observation;
  std::vector<RewardTuple> rewards;
};

/// Tabulated MPOMDP with factored rewards. Immutable after construction, so
/// one instance can be shared by concurrent samplers.
class Environment {
 public:
  struct Successor {
    State state;
    double probability;
  };

  Environment(std::string name, ModelDefinition model);

  const std::string& name() const { return name_; }
  const DomainSpec& spec() const { return spec_; }
  std::uint32_t num_states() const { return static_cast<std::uint32_t>(state_names_.size()); }
  const std::string& state_name(State s) const { return state_names_.at(s); }
  std::span<const double> initial_distribution() const { return initial_; }

  std::span<const Successor> transitions(State s, JointAction a) const {
    const std::size_t row = row_index(s, a);
    return {successors_.data() + row_begin_[row], successors_.data() + row_begin_[row + 1]};
  }
  std::span<const double> observation_probabilities(State next, JointAction a) const {
    const std::size_t width = spec_.num_joint_observations();
    return {observations_.data() + row_index(next, a) * width, width};
  }

  double local_reward(State s, std::size_t agent, std::uint32_t action) const {
    return local_[local_offset_[agent] + s * spec_.num_actions(agent) + action];
  }
  double global_reward(State s, JointAction a) const { return global_[row_index(s, a)]; }
  /// sum_i R_i(s, a_i) + R_G(s, a)
  double team_reward(State s, JointAction a) const;

  /// (R_i(s, a_i), R_G(s, a)) per agent. Throws std::invalid_argument for an
  /// unknown state or action.
  std::vector<RewardTuple> factored_reward(State s, JointAction a) const;

  State sample_initial(RngStream& rng) const;
  State sample_next(State s, JointAction a, RngStream& rng) const;
  JointObservation sample_observation(State next, JointAction a, RngStream& rng) const;
  StepResult step(State s, JointAction a, RngStream& rng) const;

  /// Same model with a different horizon or discount.
  Environment with_horizon(std::size_t horizon) const;
  Environment with_discount(double discount) const;

 private:
  std::size_t row_index(State s, JointAction a) const {
    return static_cast<std::size_t>(s) * spec_.num_joint_actions() + a.index;
  }

  std::string name_;
  DomainSpec spec_;
  std::vector<std::string> state_names_;
  std::vector<double> initial_;
  std::vector<double> initial_cdf_;
  std::vector<std::size_t> row_begin_;
  std::vector<Successor> successors_;
  std::vector<double> successor_cdf_;
  std::vector<double> observations_;
  std::vector<double> observation_cdf_;
  std::vector<std::size_t> local_offset_;
  std::vector<double> local_;
  std::vector<double> global_;
};

}  // namespace mces::env
