#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "mces/env/domains.hpp"
#include "mces/env/oracle.hpp"
#include "mces/env/sampling.hpp"
#include "oracle/value_oracle.hpp"
#include "support/toy_envs.hpp"

using namespace mces;
using namespace mces::env;

namespace {

State state_named(const Environment& env, const std::string& name) {
  for (State s = 0; s < env.num_states(); ++s) {
    if (env.state_name(s) == name) return s;
  }
  throw std::invalid_argument("no state " + name);
}

JointPolicy random_policy(const DomainSpec& spec, std::uint64_t seed) {
  RngStream rng(seed, 99);
  return JointPolicy::random(spec, rng);
}

void expect_frequencies(const std::vector<double>& p, const std::vector<std::uint64_t>& counts, std::uint64_t n) {
  for (std::size_t k = 0; k < p.size(); ++k) {
    const double sd = std::sqrt(n * p[k] * (1.0 - p[k]));
    EXPECT_LE(std::abs(static_cast<double>(counts[k]) - n * p[k]), 3.0 * sd + 1e-9) << "outcome " << k;
  }
}

}  // namespace

TEST(Domains, Dimensions) {
  struct Row {
    const char* name;
    std::size_t agents, states, actions, observations;
  };
  for (const Row& r : {Row{"tiger", 2, 2, 3, 2}, Row{"fire", 3, 648, 3, 2}, Row{"align2", 2, 4, 4, 2},
                       Row{"align4", 4, 16, 4, 2}}) {
    const Environment env = make_environment(r.name, 3);
    EXPECT_EQ(env.spec().num_agents(), r.agents) << r.name;
    EXPECT_EQ(env.num_states(), r.states) << r.name;
    for (std::size_t i = 0; i < r.agents; ++i) {
      EXPECT_EQ(env.spec().num_actions(i), r.actions) << r.name;
      EXPECT_EQ(env.spec().num_observations(i), r.observations) << r.name;
    }
    EXPECT_DOUBLE_EQ(env.spec().discount(), 0.9);
  }
  EXPECT_THROW(make_environment("maze", 3), std::invalid_argument);
}

TEST(Domains, TigerRewards) {
  const Environment env = make_environment("tiger", 2);
  const auto& spec = env.spec();
  const State left = state_named(env, "tiger-left");
  // open-right is the good door when the tiger is on the left
  EXPECT_EQ(env.local_reward(left, 0, 1), -1.0);
  EXPECT_EQ(env.local_reward(left, 1, 2), -2.0);
  EXPECT_EQ(env.local_reward(left, 1, 0), 0.0);
  EXPECT_EQ(env.global_reward(left, spec.encode_action({0, 0})), -2.0);
  EXPECT_EQ(env.global_reward(left, spec.encode_action({2, 2})), 20.0);
  EXPECT_EQ(env.global_reward(left, spec.encode_action({1, 1})), -50.0);
  EXPECT_EQ(env.global_reward(left, spec.encode_action({2, 0})), 9.0);
  EXPECT_EQ(env.global_reward(left, spec.encode_action({0, 1})), -101.0);
  EXPECT_EQ(env.global_reward(left, spec.encode_action({1, 2})), -100.0);
  const auto tuples = env.factored_reward(left, spec.encode_action({2, 1}));
  EXPECT_EQ(tuples[0], (RewardTuple{-1.0, -100.0}));
  EXPECT_EQ(tuples[1], (RewardTuple{-2.0, -100.0}));
  EXPECT_EQ(env.team_reward(left, spec.encode_action({2, 1})), -103.0);
  EXPECT_THROW(env.factored_reward(2, JointAction{0}), std::invalid_argument);
}

TEST(Domains, FireRewards) {
  const Environment env = make_environment("fire", 2);
  const auto& spec = env.spec();
  const State s = state_named(env, "fire0210-pos010");
  // second agent stands at house 3, fights house 2 (burning at level 2)
  EXPECT_DOUBLE_EQ(env.local_reward(s, 1, 0), -(1.0 + 2.0) / 8.0);
  EXPECT_DOUBLE_EQ(env.local_reward(s, 1, 1), -(0.0 + 1.0) / 8.0);
  EXPECT_DOUBLE_EQ(env.local_reward(s, 0, 0), -(0.0 + 0.0) / 9.0);
  EXPECT_DOUBLE_EQ(env.local_reward(s, 2, 1), -(1.0 + 0.0) / 7.0);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(env.local_reward(s, i, 2), 0.0);
  EXPECT_EQ(env.global_reward(s, spec.encode_action({2, 2, 2})), -3.0);
}

TEST(Domains, AlignmentRewards) {
  const Environment env = make_environment("align2", 2);
  const auto& spec = env.spec();
  const State s = state_named(env, "orientFA");
  enum { cw, ccw, emit, noop };
  EXPECT_EQ(env.global_reward(s, spec.encode_action({noop, cw})), 100.0);
  EXPECT_EQ(env.global_reward(s, spec.encode_action({noop, noop})), -1.0);
  EXPECT_EQ(env.global_reward(s, spec.encode_action({cw, cw})), -1.0);
  EXPECT_EQ(env.local_reward(s, 0, cw), -3.0);
  EXPECT_EQ(env.local_reward(s, 1, ccw), -4.0);
  EXPECT_EQ(env.local_reward(s, 0, emit), -2.0);
  EXPECT_EQ(env.local_reward(s, 1, emit), -3.0);
  EXPECT_EQ(env.local_reward(s, 1, noop), 0.0);
  const Environment four = make_environment("align4", 2);
  EXPECT_EQ(four.local_reward(0, 3, cw), -6.0);
  EXPECT_EQ(four.global_reward(state_named(four, "orientFAAF"), four.spec().encode_action({noop, cw, noop, noop})),
            99.0);
}

TEST(Domains, InitialStatesAreNeverAligned) {
  const Environment env = make_environment("align2", 2);
  EXPECT_EQ(env.initial_distribution()[state_named(env, "orientFF")], 0.0);
  EXPECT_DOUBLE_EQ(env.initial_distribution()[state_named(env, "orientAA")], 1.0 / 3.0);
}

TEST(Sampling, KernelFrequenciesMatch) {
  const Environment tiger = make_environment("tiger", 2);
  const std::uint64_t n = 200000;
  {
    RngStream rng(1, 0);
    std::vector<std::uint64_t> counts(4, 0);
    for (std::uint64_t k = 0; k < n; ++k) ++counts[tiger.sample_observation(0, JointAction{0}, rng).index];
    const auto p = tiger.observation_probabilities(0, JointAction{0});
    expect_frequencies({p.begin(), p.end()}, counts, n);
    EXPECT_NEAR(p[0], 0.85 * 0.85, 1e-15);
  }
  const Environment fire = make_environment("fire", 2);
  for (State s : {State{0}, state_named(fire, "fire0210-pos010"), state_named(fire, "fire2121-pos101")}) {
    const JointAction a = fire.spec().encode_action({1, 0, 2});
    RngStream rng(2, s);
    std::map<State, std::uint64_t> hist;
    for (std::uint64_t k = 0; k < n; ++k) ++hist[fire.sample_next(s, a, rng)];
    std::vector<double> p;
    std::vector<std::uint64_t> counts;
    double total = 0.0;
    for (const auto& succ : fire.transitions(s, a)) {
      p.push_back(succ.probability);
      counts.push_back(hist[succ.state]);
      total += succ.probability;
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
    expect_frequencies(p, counts, n);
  }
}

TEST(Sampling, Deterministic) {
  const Environment env = make_environment("fire", 4);
  const JointPolicy pi = random_policy(env.spec(), 3);
  RngStream a(17, 4), b(17, 4), c(18, 4);
  const Trajectory ta = sample_trajectory(env, pi, a);
  EXPECT_EQ(ta, sample_trajectory(env, pi, b));
  bool differs = false;
  for (int k = 0; k < 20 && !differs; ++k) differs = sample_trajectory(env, pi, c) != ta;
  EXPECT_TRUE(differs);
}

TEST(Sampling, SingleStepTrajectory) {
  const Environment env = make_environment("tiger", 1);
  RngStream rng(1, 1);
  const Trajectory tr = sample_trajectory(env, JointPolicy::constant(env.spec(), JointAction{0}), rng);
  EXPECT_EQ(tr.horizon(), 1u);
  EXPECT_TRUE(tr.observations().empty());
  EXPECT_EQ(trajectory_return(tr, 0.9), -2.0);
}

TEST(Sampling, CounterChainByHand) {
  const Environment env = toy::counter_chain(3);
  const JointPolicy pi = JointPolicy::constant(env.spec(), JointAction{3});
  RngStream rng(5, 5);
  std::vector<NodeId> nodes;
  Trajectory tr;
  rollout(env, pi.table(), 3, rng, tr, {}, &nodes);
  ASSERT_EQ(tr.observations().size(), 2u);
  // states 0 -> 2 -> 1
  EXPECT_EQ(tr.observation(0), JointObservation{1});
  EXPECT_EQ(tr.observation(1), JointObservation{2});
  EXPECT_EQ(tr.global_reward(0), 0.0);
  EXPECT_EQ(tr.global_reward(1), 2.0);
  EXPECT_EQ(tr.global_reward(2), 1.0);
  EXPECT_EQ(tr.local_reward(1, 0), -1.0);
  EXPECT_NEAR(trajectory_return(tr, 0.9), -2.0 + 0.0 - 0.81, 1e-12);
  const SequenceTree tree(env.spec());
  EXPECT_EQ(nodes[0], SequenceTree::root());
  EXPECT_EQ(nodes[1], tree.node_of({JointObservation{1}}));
  EXPECT_EQ(nodes[2], tree.node_of({JointObservation{1}, JointObservation{2}}));
}

TEST(Sampling, ForcedActionOverridesOneNode) {
  const Environment env = toy::counter_chain(3);
  const JointPolicy pi = JointPolicy::constant(env.spec(), JointAction{0});
  const SequenceTree tree(env.spec());
  RngStream rng(1, 2);
  const Trajectory root = sample_with_start(env, pi, {SequenceTree::root(), JointAction{2}}, rng);
  EXPECT_EQ(root.action(0), JointAction{2});
  EXPECT_EQ(root.action(1), JointAction{0});
  // constant 0 keeps state 0, agent observations (0, 1): joint 1
  const NodeId reached = tree.node_of({JointObservation{1}});
  const Trajectory inner = sample_with_start(env, pi, {reached, JointAction{3}}, rng);
  EXPECT_EQ(inner.action(0), JointAction{0});
  EXPECT_EQ(inner.action(1), JointAction{3});
  const Trajectory missed = sample_with_start(env, pi, {tree.node_of({JointObservation{2}}), JointAction{3}}, rng);
  for (std::size_t t = 0; t < 3; ++t) EXPECT_EQ(missed.action(t), JointAction{0});
}

TEST(Oracle, BothListenByHand) {
  const Environment env = make_environment("tiger", 2);
  const JointPolicy listen = JointPolicy::constant(env.spec(), JointAction{0});
  EXPECT_NEAR(exact_policy_value(env, listen), -2.0 - 0.9 * 2.0, 1e-12);
  EXPECT_NEAR(exact_policy_value(env, listen, 0), -3.8, 1e-12);
}

TEST(Oracle, MatchesPathEnumeration) {
  std::vector<Environment> envs{make_environment("tiger", 3), make_environment("fire", 2),
                                make_environment("align2", 3), toy::counter_chain(4)};
  for (std::uint64_t seed = 1; seed <= 5; ++seed) envs.push_back(toy::random_model(seed, 3, 2, 2, 3));
  for (const Environment& env : envs) {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
      const JointPolicy pi = random_policy(env.spec(), seed);
      const oracle::Values want = oracle::path_values(env, pi);
      const PolicyValue got = exact_policy_values(env, pi);
      const double tol = 1e-9 * (1.0 + std::abs(want.team));
      EXPECT_NEAR(got.team, want.team, tol) << env.name();
      for (std::size_t i = 0; i < want.agents.size(); ++i) EXPECT_NEAR(got.agents[i], want.agents[i], tol);
      EXPECT_NEAR(exact_policy_value(env, PolicyVector::from_joint(env.spec(), pi)), want.team, tol);
    }
  }
}

TEST(Oracle, MonteCarloAgrees) {
  for (const char* name : {"tiger", "fire"}) {
    const Environment env = make_environment(name, 3);
    const JointPolicy pi = random_policy(env.spec(), 7);
    const double exact = exact_policy_value(env, pi);
    const MonteCarloEstimate mc = monte_carlo_value(env, pi, 200000, 11);
    EXPECT_EQ(mc.samples, 200000u);
    EXPECT_LT(std::abs(mc.mean - exact), 4.0 * mc.std_error) << name;
  }
}

TEST(Oracle, LinearInRewards) {
  const std::vector<std::vector<double>> g{{1.0, -2.0}, {0.5, 3.0}};
  const Environment base = toy::matrix_game(3, g, {0.0, -1.0}, {-0.5, 0.0}, 0.8);
  const Environment scaled = toy::matrix_game(3, {{3.0, -6.0}, {1.5, 9.0}}, {0.0, -3.0}, {-1.5, 0.0}, 0.8);
  oracle::for_each_policy(base.spec(), [&](const JointPolicy& pi) {
    EXPECT_NEAR(exact_policy_value(scaled, pi), 3.0 * exact_policy_value(base, pi), 1e-12);
  });
}

TEST(Oracle, NeighborDeltasMatchTransformedValues) {
  for (const Environment& env : {make_environment("tiger", 3), toy::random_model(4, 2, 2, 2, 3)}) {
    const JointPolicy pi = random_policy(env.spec(), 2);
    const oracle::Values base = oracle::path_values(env, pi);
    const auto deltas = neighbor_value_deltas(env, pi);
    EXPECT_EQ(deltas.size(), std::size_t{SequenceTree(env.spec()).size()} * (env.spec().num_joint_actions() - 1));
    for (const NeighborDelta& d : deltas) {
      EXPECT_NE(d.action, pi.action(d.node));
      const oracle::Values next = oracle::path_values(env, transform_policy(pi, d.node, d.action));
      EXPECT_NEAR(d.team, next.team - base.team, 1e-9);
      for (std::size_t i = 0; i < d.agents.size(); ++i) EXPECT_NEAR(d.agents[i], next.agents[i] - base.agents[i], 1e-9);
    }
  }
}

TEST(Oracle, ReachProbabilitiesSumPerLevel) {
  const Environment env = make_environment("fire", 3);
  const JointPolicy pi = random_policy(env.spec(), 5);
  const auto reach = reach_probabilities(env, pi);
  const SequenceTree tree(env.spec());
  for (std::size_t t = 0; t < 3; ++t) {
    double sum = 0.0;
    for (std::uint32_t k = 0; k < tree.level_size(t); ++k) sum += reach[tree.level_offset(t) + k];
    EXPECT_NEAR(sum, 1.0, 1e-12);
  }
}

TEST(Oracle, RefusesOversizedEnumeration) {
  const Environment env = make_environment("fire", 8);
  EXPECT_GT(oracle_leaf_terms(env), kOracleLeafBudget);
  EXPECT_THROW(exact_policy_value(env, JointPolicy::constant(env.spec(), JointAction{0})), OracleRefused);
  EXPECT_NO_THROW(exact_policy_value(make_environment("fire", 4), JointPolicy::constant(env.spec().with_horizon(4), JointAction{0})));
}

TEST(Environment, RejectsBadModels) {
  const Environment good = toy::counter_chain(2);
  auto broken = [&](auto mutate) {
    std::vector<DomainSpec::Agent> agents{DomainSpec::Agent::anonymous(2, 2, {-1.0, 0.0}),
                                          DomainSpec::Agent::anonymous(2, 2, {-1.0, 0.0})};
    ModelDefinition m{DomainSpec(agents, 2, 0.9, {0.0, 2.0}), {"a", "b"}, {0.5, 0.5}, {}, {}, {}, {}};
    m.transition = [](State s, JointAction) { return std::vector<std::pair<State, double>>{{s, 1.0}}; };
    m.observation = [](State, JointAction) { return std::vector<double>(4, 0.25); };
    m.local_reward = [](State, std::size_t, std::uint32_t) { return 0.0; };
    m.global_reward = [](State, JointAction) { return 1.0; };
    mutate(m);
    return Environment("broken", std::move(m));
  };
  EXPECT_NO_THROW(broken([](ModelDefinition&) {}));
  EXPECT_THROW(broken([](ModelDefinition& m) { m.initial = {0.5, 0.6}; }), std::invalid_argument);
  EXPECT_THROW(broken([](ModelDefinition& m) {
                 m.transition = [](State, JointAction) { return std::vector<std::pair<State, double>>{{0, 0.5}}; };
               }),
               std::invalid_argument);
  EXPECT_THROW(broken([](ModelDefinition& m) {
                 m.transition = [](State, JointAction) { return std::vector<std::pair<State, double>>{{7, 1.0}}; };
               }),
               std::invalid_argument);
  EXPECT_THROW(broken([](ModelDefinition& m) { m.observation = [](State, JointAction) { return std::vector<double>(3, 1.0 / 3); }; }),
               std::invalid_argument);
  EXPECT_THROW(broken([](ModelDefinition& m) { m.global_reward = [](State, JointAction) { return 5.0; }; }),
               std::invalid_argument);
  EXPECT_THROW(broken([](ModelDefinition& m) { m.local_reward = [](State, std::size_t, std::uint32_t) { return 0.5; }; }),
               std::invalid_argument);
}

TEST(EnvConfig, ParsesKeyValueFiles) {
  const EnvConfig cfg = EnvConfig::parse("# header\n\nalpha = 0.5\nlist = 1, 2,3 # trailing\n", "test");
  EXPECT_EQ(cfg.number("alpha"), 0.5);
  EXPECT_EQ(cfg.numbers("list"), (std::vector<double>{1, 2, 3}));
  EXPECT_EQ(cfg.number_or("missing", 4.0), 4.0);
  EXPECT_THROW(cfg.number("missing"), std::invalid_argument);
  EXPECT_THROW(cfg.require_only({"alpha"}), std::invalid_argument);
  EXPECT_NO_THROW(cfg.require_only({"alpha", "list"}));
  EXPECT_THROW(EnvConfig::parse("a = 1\na = 2\n"), std::invalid_argument);
  EXPECT_THROW(EnvConfig::parse("just words\n"), std::invalid_argument);
  EXPECT_THROW(EnvConfig::parse("a = one\n").number("a"), std::invalid_argument);
  EXPECT_THROW(EnvConfig::load("/nonexistent/x.cfg"), std::runtime_error);
}

TEST(EnvConfig, ConfigChangesTheModel) {
  EnvConfig cfg = EnvConfig::load(default_data_dir() / "tiger.cfg");
  cfg.set("open_cost", "3");
  const Environment env = make_tiger(cfg, 2);
  EXPECT_EQ(env.local_reward(0, 1, 1), -6.0);
  cfg.set("bogus", "1");
  EXPECT_THROW(make_tiger(cfg, 2), std::invalid_argument);
}
