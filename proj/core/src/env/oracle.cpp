#include "mces/env/oracle.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "mces/sequence_tree.hpp"
#include "mces/trajectory.hpp"
#include "mces/env/sampling.hpp"

namespace mces::env {

std::uint64_t oracle_leaf_terms(const Environment& env) {
  const std::uint64_t B = env.spec().num_joint_observations();
  RngStream::wide terms = env.num_states();
  for (std::size_t t = 0; t < env.spec().horizon(); ++t) {
    terms *= B;
    if (terms > std::numeric_limits<std::uint64_t>::max()) return std::numeric_limits<std::uint64_t>::max();
  }
  return static_cast<std::uint64_t>(terms);
}

namespace {

// Depth-first walk over observation histories carrying the unnormalized
// state distribution (joint probability of history and state). A forced
// action replaces the policy's action at one node.
class Walker {
 public:
  Walker(const Environment& env, std::span<const JointAction> policy, bool keep_beliefs = false)
      : env_(env), spec_(env.spec()), policy_(policy), agents_(spec_.num_agents(), 0.0), reach_(policy.size(), 0.0) {
    if (keep_beliefs) beliefs_.resize(policy.size());
  }

  void run() {
    std::vector<double> b(env_.initial_distribution().begin(), env_.initial_distribution().end());
    visit(0, 0, 0, 1.0, b);
  }

  /// Value of the subtree below `node` (depth `depth`) reached with belief b.
  void run_from(NodeId node, std::size_t depth, const std::vector<double>& b, std::optional<JointAction> forced) {
    forced_ = forced;
    forced_node_ = node.index;
    std::uint64_t offset = 0;
    for (std::size_t t = 0; t < depth; ++t) offset = offset * spec_.num_joint_observations() + 1;
    double weight = 1.0;
    for (std::size_t t = 0; t < depth; ++t) weight *= spec_.discount();
    visit(depth, offset, node.index - offset, weight, b);
  }

  double team() const { return team_; }
  const std::vector<double>& agents() const { return agents_; }
  const std::vector<double>& reach() const { return reach_; }
  const std::vector<std::vector<double>>& beliefs() const { return beliefs_; }

 private:
  void visit(std::size_t depth, std::uint64_t offset, std::uint64_t rel, double weight, const std::vector<double>& b) {
    const std::size_t node = offset + rel;
    if (!beliefs_.empty()) beliefs_[node] = b;
    const JointAction a = forced_ && node == forced_node_ ? *forced_ : policy_[node];
    const std::size_t Z = spec_.num_agents();
    double mass = 0.0;
    for (State s = 0; s < b.size(); ++s) {
      if (b[s] == 0.0) continue;
      mass += b[s];
      const double g = env_.global_reward(s, a);
      double sum = g;
      for (std::size_t i = 0; i < Z; ++i) {
        const double l = env_.local_reward(s, i, spec_.agent_action(a, i));
        agents_[i] += weight * b[s] * (l + g);
        sum += l;
      }
      team_ += weight * b[s] * sum;
    }
    reach_[node] += mass;
    if (depth + 1 == spec_.horizon()) return;

    std::vector<double> next(b.size(), 0.0);
    for (State s = 0; s < b.size(); ++s) {
      if (b[s] == 0.0) continue;
      for (const auto& succ : env_.transitions(s, a)) next[succ.state] += b[s] * succ.probability;
    }
    const std::uint64_t B = spec_.num_joint_observations();
    std::vector<double> child(b.size());
    for (std::uint32_t o = 0; o < B; ++o) {
      bool any = false;
      for (State s = 0; s < b.size(); ++s) {
        child[s] = next[s] == 0.0 ? 0.0 : next[s] * env_.observation_probabilities(s, a)[o];
        any = any || child[s] != 0.0;
      }
      if (any) visit(depth + 1, offset * B + 1, rel * B + o, weight * spec_.discount(), child);
    }
  }

  const Environment& env_;
  const DomainSpec& spec_;
  std::span<const JointAction> policy_;
  std::optional<JointAction> forced_;
  std::size_t forced_node_ = 0;
  double team_ = 0.0;
  std::vector<double> agents_;
  std::vector<double> reach_;
  std::vector<std::vector<double>> beliefs_;
};

void check_budget(const Environment& env, const JointPolicy& policy, std::uint64_t budget) {
  const std::uint64_t terms = oracle_leaf_terms(env);
  if (terms > budget) {
    throw OracleRefused(fmt::format("exact evaluation of {} needs {} leaf terms, budget is {}", env.name(), terms, budget));
  }
  if (policy.size() != SequenceTree(env.spec()).size()) throw std::invalid_argument("policy does not match the environment");
}

Walker walk(const Environment& env, const JointPolicy& policy, std::uint64_t budget) {
  check_budget(env, policy, budget);
  Walker w(env, policy.table());
  w.run();
  return w;
}

}  // namespace

PolicyValue exact_policy_values(const Environment& env, const JointPolicy& policy, std::uint64_t budget) {
  const Walker w = walk(env, policy, budget);
  return {w.team(), w.agents()};
}

double exact_policy_value(const Environment& env, const JointPolicy& policy, std::optional<std::size_t> agent,
                          std::uint64_t budget) {
  const PolicyValue v = exact_policy_values(env, policy, budget);
  return agent ? v.agents.at(*agent) : v.team;
}

double exact_policy_value(const Environment& env, const PolicyVector& policy, std::optional<std::size_t> agent,
                          std::uint64_t budget) {
  return exact_policy_value(env, policy.to_joint(env.spec()), agent, budget);
}

std::vector<double> reach_probabilities(const Environment& env, const JointPolicy& policy, std::uint64_t budget) {
  return walk(env, policy, budget).reach();
}

std::vector<NeighborDelta> neighbor_value_deltas(const Environment& env, const JointPolicy& policy,
                                                 std::uint64_t budget) {
  check_budget(env, policy, budget);
  const DomainSpec& spec = env.spec();
  const SequenceTree tree(spec);
  Walker all(env, policy.table(), true);
  all.run();
  std::vector<NeighborDelta> out;
  for (std::uint32_t n = 0; n < tree.size(); ++n) {
    const NodeId node{n};
    const std::vector<double>& b = all.beliefs()[n];
    const JointAction current = policy.action(node);
    if (b.empty()) {  // unreachable: every neighbor here has the same value
      for (std::uint32_t a = 0; a < spec.num_joint_actions(); ++a) {
        if (a != current.index) out.push_back({node, JointAction{a}, 0.0, std::vector<double>(spec.num_agents(), 0.0)});
      }
      continue;
    }
    const std::size_t depth = tree.depth(node);
    Walker base(env, policy.table());
    base.run_from(node, depth, b, std::nullopt);
    for (std::uint32_t a = 0; a < spec.num_joint_actions(); ++a) {
      if (a == current.index) continue;
      Walker alt(env, policy.table());
      alt.run_from(node, depth, b, JointAction{a});
      NeighborDelta d{node, JointAction{a}, alt.team() - base.team(), {}};
      for (std::size_t i = 0; i < spec.num_agents(); ++i) d.agents.push_back(alt.agents()[i] - base.agents()[i]);
      out.push_back(std::move(d));
    }
  }
  return out;
}

MonteCarloEstimate monte_carlo_value(const Environment& env, const JointPolicy& policy, std::uint64_t samples,
                                     std::uint64_t seed, std::optional<std::size_t> agent) {
  MonteCarloEstimate out;
  out.samples = samples;
  if (samples == 0) return out;
  Trajectory tr;
  double mean = 0.0, m2 = 0.0;
  for (std::uint64_t k = 0; k < samples; ++k) {
    RngStream rng(seed, streams::evaluation(k));
    rollout(env, policy.table(), env.spec().horizon(), rng, tr);
    const double x = trajectory_return(tr, env.spec().discount(), agent);
    const double delta = x - mean;
    mean += delta / static_cast<double>(k + 1);
    m2 += delta * (x - mean);
  }
  out.mean = mean;
  out.std_error = samples > 1 ? std::sqrt(m2 / static_cast<double>(samples - 1) / static_cast<double>(samples)) : 0.0;
  return out;
}

}  // namespace mces::env
