#include "mces/harness/verify.hpp"

#include <algorithm>
#include <limits>

namespace mces::harness {

VerifyResult verify_local_optimum(const env::Environment& env, const JointPolicy& policy, double eps, VerifyMode mode,
                                  bool normalize, std::uint64_t budget) {
  const DomainSpec& spec = env.spec();
  const double team_width = normalize ? spec.team_reward_bounds().width() : 1.0;
  std::vector<double> agent_width;
  for (std::size_t i = 0; i < spec.num_agents(); ++i) {
    agent_width.push_back(normalize ? spec.agent_reward_bounds(i).width() : 1.0);
  }

  VerifyResult out;
  out.worst_violation = -std::numeric_limits<double>::infinity();
  for (const env::NeighborDelta& d : env::neighbor_value_deltas(env, policy, budget)) {
    double gain = 0.0;
    if (mode == VerifyMode::mp) {
      gain = d.team / team_width;
    } else {
      gain = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < d.agents.size(); ++i) gain = std::min(gain, d.agents[i] / agent_width[i]);
    }
    ++out.neighbors_checked;
    if (gain > out.worst_violation) {
      out.worst_violation = gain;
      out.worst_node = d.node;
      out.worst_action = d.action;
    }
  }
  out.locally_optimal = !(out.worst_violation > eps);
  return out;
}

}  // namespace mces::harness
