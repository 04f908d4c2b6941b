#include "mces/env/sampling.hpp"

#include <array>
#include <stdexcept>

namespace mces::env {

namespace {
constexpr std::size_t kMaxAgents = 64;
}

void rollout(const Environment& env, std::span<const JointAction> policy, std::size_t horizon, RngStream& rng,
             Trajectory& out, std::optional<ForcedAction> forced, std::vector<NodeId>* nodes) {
  const DomainSpec& spec = env.spec();
  const std::size_t Z = spec.num_agents();
  if (Z > kMaxAgents) throw std::invalid_argument("rollout supports at most 64 agents");
  if (horizon == 0 || horizon > spec.horizon()) throw std::invalid_argument("rollout horizon outside 1..T");
  const std::uint64_t B = spec.num_joint_observations();
  std::array<double, kMaxAgents> local{};

  out.clear(Z);
  if (nodes) nodes->clear();
  std::uint64_t offset = 0;  // nodes shorter than the current depth
  std::uint64_t rel = 0;     // mixed-radix value of the current sequence
  State s = env.sample_initial(rng);
  for (std::size_t t = 0; t < horizon; ++t) {
    const NodeId node{static_cast<std::uint32_t>(offset + rel)};
    if (nodes) nodes->push_back(node);
    const JointAction a = forced && forced->node == node ? forced->action : policy[node.index];
    for (std::size_t i = 0; i < Z; ++i) local[i] = env.local_reward(s, i, spec.agent_action(a, i));
    out.append(a, std::span<const double>(local.data(), Z), env.global_reward(s, a));
    if (t + 1 == horizon) break;
    s = env.sample_next(s, a, rng);
    const JointObservation o = env.sample_observation(s, a, rng);
    out.append_observation(o);
    offset = offset * B + 1;
    rel = rel * B + o.index;
  }
}

Trajectory sample_trajectory(const Environment& env, const JointPolicy& policy, std::size_t horizon, RngStream& rng) {
  Trajectory out;
  rollout(env, policy.table(), horizon, rng, out);
  return out;
}

Trajectory sample_trajectory(const Environment& env, const PolicyVector& policy, std::size_t horizon, RngStream& rng) {
  return sample_trajectory(env, policy.to_joint(env.spec()), horizon, rng);
}

Trajectory sample_trajectory(const Environment& env, const JointPolicy& policy, RngStream& rng) {
  return sample_trajectory(env, policy, env.spec().horizon(), rng);
}

Trajectory sample_with_start(const Environment& env, const JointPolicy& policy, ForcedAction forced, RngStream& rng) {
  Trajectory out;
  rollout(env, policy.table(), env.spec().horizon(), rng, out, forced);
  return out;
}

}  // namespace mces::env
