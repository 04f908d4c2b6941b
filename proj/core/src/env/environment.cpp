#include "mces/env/environment.hpp"

#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace mces::env {

namespace {

constexpr double kTolerance = 1e-12;

void check_distribution(std::span<const double> p, const std::string& what) {
  double sum = 0.0;
  for (const double x : p) {
    if (!(x >= 0.0 && x <= 1.0 + kTolerance)) throw std::invalid_argument(fmt::format("{}: probability {} outside [0, 1]", what, x));
    sum += x;
  }
  if (std::abs(sum - 1.0) > kTolerance) throw std::invalid_argument(fmt::format("{}: row sums to {}", what, sum));
}

std::vector<double> cumulative(std::span<const double> p) {
  std::vector<double> out(p.size());
  double run = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) out[k] = run += p[k];
  return out;
}

// First k with u < cdf[k], skipping zero-mass entries; rounding slack at the
// top of the row falls back to the last entry with mass.
std::size_t pick(std::span<const double> cdf, std::span<const double> mass, double u) {
  for (std::size_t k = 0; k < cdf.size(); ++k) {
    if (u < cdf[k] && mass[k] > 0.0) return k;
  }
  for (std::size_t k = cdf.size(); k-- > 0;) {
    if (mass[k] > 0.0) return k;
  }
  return 0;
}

}  // namespace

Environment::Environment(std::string name, ModelDefinition model)
    : name_(std::move(name)), spec_(std::move(model.spec)), state_names_(std::move(model.state_names)),
      initial_(std::move(model.initial)) {
  const std::uint32_t S = num_states();
  const std::uint32_t A = spec_.num_joint_actions();
  const std::uint32_t O = spec_.num_joint_observations();
  if (S == 0) throw std::invalid_argument(name_ + ": no states");
  if (initial_.size() != S) throw std::invalid_argument(name_ + ": initial distribution has the wrong size");
  check_distribution(initial_, name_ + " initial distribution");
  initial_cdf_ = cumulative(initial_);

  row_begin_.reserve(static_cast<std::size_t>(S) * A + 1);
  row_begin_.push_back(0);
  observations_.reserve(static_cast<std::size_t>(S) * A * O);
  global_.reserve(static_cast<std::size_t>(S) * A);
  const RewardRange global_bounds = spec_.global_reward_bounds();
  for (State s = 0; s < S; ++s) {
    for (std::uint32_t a = 0; a < A; ++a) {
      const JointAction ja{a};
      const auto where = [&] { return fmt::format("{} (state {}, joint action {})", name_, state_names_[s], a); };
      std::vector<double> row(S, 0.0);
      for (const auto& [next, p] : model.transition(s, ja)) {
        if (next >= S) throw std::invalid_argument(where() + ": successor state out of range");
        row[next] += p;
      }
      check_distribution(row, where() + " transition");
      double run = 0.0;
      for (State next = 0; next < S; ++next) {
        if (row[next] > 0.0) {
          successors_.push_back({next, row[next]});
          successor_cdf_.push_back(run += row[next]);
        }
      }
      row_begin_.push_back(successors_.size());

      const std::vector<double> obs = model.observation(s, ja);
      if (obs.size() != O) throw std::invalid_argument(where() + ": observation row has the wrong width");
      check_distribution(obs, where() + " observation");
      observations_.insert(observations_.end(), obs.begin(), obs.end());
      const std::vector<double> obs_cdf = cumulative(obs);
      observation_cdf_.insert(observation_cdf_.end(), obs_cdf.begin(), obs_cdf.end());

      const double g = model.global_reward(s, ja);
      if (!global_bounds.contains(g)) throw std::invalid_argument(fmt::format("{}: global reward {} outside bounds", where(), g));
      global_.push_back(g);
    }
  }
  for (std::size_t i = 0; i < spec_.num_agents(); ++i) {
    local_offset_.push_back(local_.size());
    const RewardRange bounds = spec_.local_reward_bounds(i);
    for (State s = 0; s < S; ++s) {
      for (std::uint32_t a = 0; a < spec_.num_actions(i); ++a) {
        const double r = model.local_reward(s, i, a);
        if (!bounds.contains(r)) {
          throw std::invalid_argument(fmt::format("{}: local reward {} of agent {} outside bounds", name_, r, i));
        }
        local_.push_back(r);
      }
    }
  }
}

double Environment::team_reward(State s, JointAction a) const {
  double sum = global_reward(s, a);
  for (std::size_t i = 0; i < spec_.num_agents(); ++i) sum += local_reward(s, i, spec_.agent_action(a, i));
  return sum;
}

std::vector<RewardTuple> Environment::factored_reward(State s, JointAction a) const {
  if (s >= num_states()) throw std::invalid_argument(fmt::format("{}: unknown state {}", name_, s));
  if (a.index >= spec_.num_joint_actions()) throw std::invalid_argument(fmt::format("{}: unknown joint action {}", name_, a.index));
  std::vector<RewardTuple> out(spec_.num_agents());
  const double g = global_reward(s, a);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = {local_reward(s, i, spec_.agent_action(a, i)), g};
  return out;
}

State Environment::sample_initial(RngStream& rng) const {
  return static_cast<State>(pick(initial_cdf_, initial_, rng.uniform()));
}

State Environment::sample_next(State s, JointAction a, RngStream& rng) const {
  const std::size_t row = row_index(s, a);
  const std::size_t begin = row_begin_[row];
  const std::size_t end = row_begin_[row + 1];
  const double u = rng.uniform();
  for (std::size_t k = begin; k < end; ++k) {
    if (u < successor_cdf_[k]) return successors_[k].state;
  }
  return successors_[end - 1].state;
}

JointObservation Environment::sample_observation(State next, JointAction a, RngStream& rng) const {
  const std::size_t width = spec_.num_joint_observations();
  const std::size_t offset = row_index(next, a) * width;
  const std::span<const double> cdf(observation_cdf_.data() + offset, width);
  const std::span<const double> mass(observations_.data() + offset, width);
  return JointObservation{static_cast<std::uint32_t>(pick(cdf, mass, rng.uniform()))};
}

StepResult Environment::step(State s, JointAction a, RngStream& rng) const {
  StepResult out;
  out.rewards = factored_reward(s, a);
  out.next = sample_next(s, a, rng);
  out.observation = sample_observation(out.next, a, rng);
  return out;
}

Environment Environment::with_horizon(std::size_t horizon) const {
  Environment out = *this;
  out.spec_ = spec_.with_horizon(horizon);
  return out;
}

Environment Environment::with_discount(double discount) const {
  Environment out = *this;
  out.spec_ = spec_.with_discount(discount);
  return out;
}

}  // namespace mces::env
