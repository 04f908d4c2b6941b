#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <set>

#include "mces/env/domains.hpp"
#include "mces/env/oracle.hpp"
#include "mces/learn/acceptance.hpp"
#include "mces/learn/exploring_start.hpp"
#include "mces/learn/learner.hpp"
#include "mces/learn/q_table.hpp"
#include "oracle/value_oracle.hpp"
#include "support/toy_envs.hpp"

using namespace mces;
using namespace mces::learn;
using mces::env::Environment;
using mces::env::make_environment;

namespace {

LearnerOptions quick(double eps = 0.5, std::uint64_t seed = 1) {
  LearnerOptions o;
  o.eps = eps;
  o.seed = seed;
  o.budget = 5'000'000;
  return o;
}

double optimum(const Environment& env) {
  double best = -std::numeric_limits<double>::infinity();
  oracle::for_each_policy(env.spec(), [&](const JointPolicy& pi) { best = std::max(best, oracle::path_values(env, pi).team); });
  return best;
}

// Two hidden states resampled every step; agent 0 sees the state with
// accuracy 0.9 and is paid 1 for naming it. Agent 1 has one action and one
// observation, so the joint policy is agent 0's policy.
Environment guessing_game(std::size_t horizon) {
  std::vector<DomainSpec::Agent> agents{DomainSpec::Agent::anonymous(2, 2, {0.0, 0.0}),
                                        DomainSpec::Agent::anonymous(1, 1, {0.0, 0.0})};
  DomainSpec spec(agents, horizon, 0.9, {0.0, 1.0});
  env::ModelDefinition m{spec, {"h0", "h1"}, {0.5, 0.5}, {}, {}, {}, {}};
  m.transition = [](env::State, JointAction) { return std::vector<std::pair<env::State, double>>{{0, 0.5}, {1, 0.5}}; };
  m.observation = [](env::State next, JointAction) {
    return next == 0 ? std::vector<double>{0.9, 0.1} : std::vector<double>{0.1, 0.9};
  };
  m.local_reward = [](env::State, std::size_t, std::uint32_t) { return 0.0; };
  m.global_reward = [](env::State s, JointAction a) { return a.index == s ? 1.0 : 0.0; };
  return Environment("guess", std::move(m));
}

Environment flat_game(std::size_t horizon) {
  std::vector<DomainSpec::Agent> agents{DomainSpec::Agent::anonymous(2, 1, {-1.0, 0.0}),
                                        DomainSpec::Agent::anonymous(2, 1, {-1.0, 0.0})};
  DomainSpec spec(agents, horizon, 1.0, {0.0, 1.0});
  env::ModelDefinition m{spec, {"s"}, {1.0}, {}, {}, {}, {}};
  m.transition = [](env::State, JointAction) { return std::vector<std::pair<env::State, double>>{{0, 1.0}}; };
  m.observation = [](env::State, JointAction) { return std::vector<double>{1.0}; };
  m.local_reward = [](env::State, std::size_t, std::uint32_t) { return 0.0; };
  m.global_reward = [](env::State, JointAction) { return 0.5; };
  return Environment("flat", std::move(m));
}

void fill(QTable& t, NodeId node, JointAction a, std::vector<double> returns, std::uint64_t times) {
  for (std::uint64_t k = 0; k < times; ++k) t.update(node, a, returns);
}

}  // namespace

TEST(QUpdate, RunningMean) {
  EXPECT_EQ(q_update(0.0, 0, 5.0).q, 5.0);
  EXPECT_EQ(q_update(0.0, 0, 5.0).count, 1u);
  EXPECT_EQ(q_update(5.0, 1, 7.0).q, 6.0);
  EXPECT_EQ(q_update(6.0, 2, 0.0).q, 4.0);
  static_assert(q_update(0.0, 0, 2.0).q == 2.0);
  QTable t(2, 3, 4);
  const std::vector<double> r{1.0, -1.0};
  t.update(NodeId{2}, JointAction{3}, r);
  t.update(NodeId{2}, JointAction{3}, std::vector<double>{3.0, 1.0});
  EXPECT_EQ(t.q(0, NodeId{2}, JointAction{3}), 2.0);
  EXPECT_EQ(t.q(1, NodeId{2}, JointAction{3}), 0.0);
  EXPECT_EQ(t.count(NodeId{2}, JointAction{3}), 2u);
  EXPECT_EQ(t.count(NodeId{2}, JointAction{2}), 0u);
  t.reset();
  EXPECT_EQ(t.count(NodeId{2}, JointAction{3}), 0u);
  EXPECT_EQ(t.q(0, NodeId{2}, JointAction{3}), 0.0);
}

TEST(QTable, AggregateCountSumsOverOtherAgents) {
  std::vector<DomainSpec::Agent> agents{DomainSpec::Agent::anonymous(2, 1, {0.0, 1.0}),
                                        DomainSpec::Agent::anonymous(3, 1, {0.0, 1.0})};
  const DomainSpec spec(agents, 2, 1.0, {0.0, 1.0});
  QTable t(1, 2, 6);
  const std::vector<double> r{0.0};
  fill(t, NodeId{1}, spec.encode_action({1, 0}), r, 2);
  fill(t, NodeId{1}, spec.encode_action({1, 2}), r, 3);
  fill(t, NodeId{1}, spec.encode_action({0, 2}), r, 7);
  EXPECT_EQ(aggregate_count(spec, t, 0, NodeId{1}, 1), 5u);
  EXPECT_EQ(aggregate_count(spec, t, 1, NodeId{1}, 2), 10u);
  EXPECT_EQ(aggregate_count(spec, t, 1, NodeId{1}, 1), 0u);
}

TEST(ExploringStarts, IteratedCoversEveryPairOncePerRound) {
  ExploringStarts s(Strategy::iterated, 3);
  s.set_active({NodeId{0}, NodeId{4}, NodeId{5}});
  RngStream rng(1, 1);
  std::vector<StartPair> seen;
  while (!s.round_complete()) seen.push_back(s.next(rng));
  ASSERT_EQ(seen.size(), 9u);
  for (std::size_t k = 0; k < 9; ++k) {
    EXPECT_EQ(seen[k].node, (std::vector<NodeId>{NodeId{0}, NodeId{4}, NodeId{5}}[k / 3]));
    EXPECT_EQ(seen[k].action, JointAction{static_cast<std::uint32_t>(k % 3)});
  }
  EXPECT_EQ(rng.draws(), 0u);
  s.rewind();
  EXPECT_EQ(s.next(rng), seen[0]);
}

TEST(ExploringStarts, RandomIsUniform) {
  ExploringStarts s(Strategy::random, 4);
  s.set_active({NodeId{1}, NodeId{2}, NodeId{3}});
  RngStream rng(2, 2);
  std::map<std::pair<std::uint32_t, std::uint32_t>, int> hist;
  const int n = 120000;
  for (int k = 0; k < n; ++k) {
    const StartPair p = s.next(rng);
    ++hist[{p.node.index, p.action.index}];
  }
  ASSERT_EQ(hist.size(), 12u);
  const double expected = n / 12.0, sd = std::sqrt(n * (1.0 / 12) * (11.0 / 12));
  for (const auto& [key, count] : hist) EXPECT_LT(std::abs(count - expected), 4 * sd);
}

TEST(ExploringStarts, SingletonAndErrors) {
  ExploringStarts s(Strategy::random, 1);
  s.set_active({NodeId{7}});
  RngStream rng(3, 3);
  for (int k = 0; k < 10; ++k) EXPECT_EQ(s.next(rng), (StartPair{NodeId{7}, JointAction{0}}));
  s.set_active({});
  EXPECT_THROW(s.next(rng), std::logic_error);
  EXPECT_THROW(ExploringStarts(Strategy::iterated, 0), std::invalid_argument);
  EXPECT_EQ(parse_strategy("random"), Strategy::random);
  EXPECT_THROW(parse_strategy("greedy"), std::invalid_argument);
}

TEST(ExploringStarts, PickOverWholeSpec) {
  const Environment env = toy::counter_chain(2);
  RngStream rng(4, 4);
  std::uint64_t position = 0;
  std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
  for (int k = 0; k < 20; ++k) {
    const StartPair p = pick_exploring_start(env.spec(), Strategy::iterated, rng, position);
    seen.insert({p.node.index, p.action.index});
  }
  EXPECT_EQ(seen.size(), 20u);
  EXPECT_EQ(position, 20u);
}

TEST(Acceptance, MpNeedsEqualCountsAndAStrictMargin) {
  const palo::PaloSchedule s = palo::PaloSchedule::mp(0.1, 0.1, 1.0, 4);
  const palo::Stage st = s.stage(1);
  const std::uint64_t k = st.k_m;
  const NodeId node{1};
  QTable t(1, 2, 3);
  fill(t, node, JointAction{0}, {0.0}, k);
  fill(t, node, JointAction{1}, {0.0625}, k);
  fill(t, node, JointAction{2}, {0.0625}, k - 1);
  // eps / 2 = 0.05 at p = q = k_m
  auto best = mp_accept(t, node, JointAction{0}, s, st);
  ASSERT_TRUE(best);
  EXPECT_EQ(best->action, JointAction{1});
  EXPECT_DOUBLE_EQ(best->advantage, 0.0625);

  QTable u(1, 2, 3);
  fill(u, node, JointAction{0}, {0.0}, k);
  fill(u, node, JointAction{1}, {0.03125}, k);
  fill(u, node, JointAction{2}, {0.03125}, k);
  EXPECT_FALSE(mp_accept(u, node, JointAction{0}, s, st));

  // ties between alternatives go to the lower joint action
  QTable v(1, 2, 3);
  fill(v, node, JointAction{0}, {0.0}, k);
  fill(v, node, JointAction{1}, {0.5}, k);
  fill(v, node, JointAction{2}, {0.5}, k);
  EXPECT_EQ(mp_accept(v, node, JointAction{0}, s, st)->action, JointAction{1});
  EXPECT_FALSE(mp_accept(v, node, JointAction{1}, s, st));

  // unequal counts never compare
  QTable w(1, 2, 2);
  fill(w, node, JointAction{0}, {0.0}, k);
  fill(w, node, JointAction{1}, {1.0}, k - 1);
  EXPECT_FALSE(mp_accept(w, node, JointAction{0}, s, st));
}

TEST(Acceptance, MpBoundaryIsRejected) {
  const palo::PaloSchedule s = palo::PaloSchedule::mp(0.5, 0.1, 1.0, 4);
  const palo::Stage st = s.stage(1);
  QTable t(1, 1, 2);
  fill(t, NodeId{0}, JointAction{0}, {0.0}, st.k_m);
  fill(t, NodeId{0}, JointAction{1}, {0.25}, st.k_m);
  EXPECT_EQ(t.q(0, NodeId{0}, JointAction{1}), 0.25);
  EXPECT_FALSE(mp_accept(t, NodeId{0}, JointAction{0}, s, st));
}

TEST(Acceptance, FmpRequiresEveryAgent) {
  const palo::PaloSchedule s = palo::PaloSchedule::fmp(0.1, 0.1, {1.0, 1.0}, {4, 4});
  const palo::Stage st = s.stage(1);
  const std::uint64_t k = st.k_m;
  QTable t(2, 1, 4);
  fill(t, NodeId{0}, JointAction{0}, {0.0, 0.0}, k);
  fill(t, NodeId{0}, JointAction{1}, {0.5, 0.0}, k);     // only agent 0 gains
  fill(t, NodeId{0}, JointAction{2}, {0.1, 0.1}, k);     // both gain
  fill(t, NodeId{0}, JointAction{3}, {0.9, -0.2}, k);    // team gain, agent 1 loses
  EXPECT_FALSE(fmp_accept(t, NodeId{0}, JointAction{0}, JointAction{1}, s, st));
  EXPECT_TRUE(fmp_accept(t, NodeId{0}, JointAction{0}, JointAction{2}, s, st));
  EXPECT_FALSE(fmp_accept(t, NodeId{0}, JointAction{0}, JointAction{3}, s, st));
  const auto best = fmp_best_transform(t, NodeId{0}, JointAction{0}, s, st);
  ASSERT_TRUE(best);
  EXPECT_EQ(best->action, JointAction{2});
  EXPECT_NEAR(best->advantage, 0.2, 1e-15);
}

TEST(Acceptance, DominanceStopsEarly) {
  const palo::PaloSchedule s = palo::PaloSchedule::mp(0.5, 0.1, 1.0, 4);
  const palo::Stage st = s.stage(1);
  // a count where the envelope has dropped to 0.4, leaving a margin of 0.1
  std::uint64_t p = 1;
  while (s.epsilon_star(st, p).value() > 0.4) ++p;
  ASSERT_LT(p, st.k_m);
  QTable t(1, 1, 2);
  fill(t, NodeId{0}, JointAction{0}, {0.5}, p);
  fill(t, NodeId{0}, JointAction{1}, {0.5}, p);
  EXPECT_TRUE(dominates(t, NodeId{0}, JointAction{0}, s, st));
  QTable u(1, 1, 2);
  fill(u, NodeId{0}, JointAction{0}, {0.0}, p);
  fill(u, NodeId{0}, JointAction{1}, {0.2}, p);
  EXPECT_FALSE(dominates(u, NodeId{0}, JointAction{0}, s, st));
  QTable v(1, 1, 2);
  fill(v, NodeId{0}, JointAction{0}, {0.5}, 1);
  fill(v, NodeId{0}, JointAction{1}, {0.5}, 1);
  EXPECT_FALSE(dominates(v, NodeId{0}, JointAction{0}, s, st));
}

TEST(Learners, FlatRewardsNeverTransform) {
  const Environment env = flat_game(2);
  for (const Algorithm algo : {Algorithm::mp, Algorithm::fmp, Algorithm::mcesp}) {
    const LearnerResult r = make_learner(algo, env, JointPolicy::constant(env.spec(), JointAction{0}), quick())->run();
    EXPECT_EQ(r.transforms, 0u) << to_string(algo);
    EXPECT_NE(r.termination, Termination::budget_exhausted) << to_string(algo);
    EXPECT_EQ(r.policy, JointPolicy::constant(env.spec(), JointAction{0}));
  }
}

TEST(Learners, DominantJointActionIsFound) {
  const Environment env = toy::matrix_game(2, {{0.0, 1.0}, {1.0, 4.0}}, {0.0, 0.0}, {0.0, 0.0}, 0.9);
  const double best = optimum(env);
  for (const Algorithm algo : {Algorithm::mp, Algorithm::fmp}) {
    const LearnerResult r = make_learner(algo, env, JointPolicy::constant(env.spec(), JointAction{0}), quick())->run();
    EXPECT_EQ(r.policy, JointPolicy::constant(env.spec(), JointAction{3})) << to_string(algo);
    EXPECT_NEAR(env::exact_policy_value(env, r.policy), best, 1e-12);
    EXPECT_EQ(r.transforms, 2u);
    EXPECT_NE(r.termination, Termination::budget_exhausted);
  }
}

TEST(Learners, FmpIsBlockedWhenOneAgentLoses) {
  // team reward l0 + l1: (1, 0) is better for the team, but moving there
  // leaves agent 1 exactly where it was
  const Environment env = toy::matrix_game(2, {{0.0, 0.0}, {0.0, 0.0}}, {0.0, 1.0}, {0.0, -1.0}, 0.9);
  const JointPolicy start = JointPolicy::constant(env.spec(), JointAction{0});
  const LearnerResult fmp = make_learner(Algorithm::fmp, env, start, quick())->run();
  EXPECT_EQ(fmp.transforms, 0u);
  EXPECT_EQ(fmp.policy, start);
  const LearnerResult mp = make_learner(Algorithm::mp, env, start, quick())->run();
  EXPECT_GE(mp.transforms, 1u);
  EXPECT_GT(env::exact_policy_value(env, mp.policy), env::exact_policy_value(env, start));
}

TEST(Learners, FmpAcceptsAJointChangeNoSingleAgentWouldMake) {
  const Environment env = toy::matrix_game(2, {{0.0, 0.0}, {0.0, 1.0}}, {0.0, 0.0}, {0.0, 0.0}, 0.9);
  const LearnerResult r =
      make_learner(Algorithm::fmp, env, JointPolicy::constant(env.spec(), JointAction{0}), quick())->run();
  EXPECT_EQ(r.policy, JointPolicy::constant(env.spec(), JointAction{3}));
  ASSERT_FALSE(r.history.empty());
  EXPECT_EQ(r.history[0].from, JointAction{0});
  EXPECT_EQ(r.history[0].to, JointAction{3});
}

TEST(Learners, McesPWithADummyPartnerReachesTheOptimum) {
  const Environment env = guessing_game(2);
  const double best = optimum(env);
  const LearnerResult r = make_learner(Algorithm::mcesp, env, JointPolicy::constant(env.spec(), JointAction{0}),
                                       quick(0.3, 3))->run();
  EXPECT_NEAR(env::exact_policy_value(env, r.policy), best, 1e-12);
  EXPECT_NE(r.termination, Termination::budget_exhausted);
  for (const auto& h : r.history) EXPECT_EQ(h.agent, 0u);
}

TEST(Learners, HistoryIsConsistentWithTheSchedule) {
  for (const Algorithm algo : {Algorithm::mp, Algorithm::fmp, Algorithm::mcesp}) {
    const Environment env = algo == Algorithm::mcesp ? guessing_game(3) : make_environment("tiger", 2);
    LearnerOptions o = quick(algo == Algorithm::mcesp ? 0.3 : 0.5, 4);
    RngStream rng(4, streams::initial_policy());
    const LearnerResult r = make_learner(algo, env, JointPolicy::random(env.spec(), rng), o)->run();
    ASSERT_GE(r.history.size(), 1u) << to_string(algo);
    std::uint64_t previous = 0;
    for (std::size_t k = 0; k < r.history.size(); ++k) {
      const TransformRecord& h = r.history[k];
      const palo::PaloSchedule s = learner_schedule(algo, env.spec(), o, h.agent);
      const palo::Stage st = s.stage(h.stage);
      EXPECT_GT(h.samples, previous);
      previous = h.samples;
      EXPECT_NE(h.from, h.to);
      EXPECT_LE(h.count, st.k_m);
      double gain = 0.0;
      for (std::size_t c = 0; c < h.q_from.size(); ++c) {
        EXPECT_DOUBLE_EQ(h.envelope[c], s.envelope(st, h.count, h.count, c).value());
        gain += h.q_to[c] - h.q_from[c];
        if (algo == Algorithm::fmp) EXPECT_GT(h.q_to[c], h.q_from[c] + h.envelope[c]);
      }
      if (algo != Algorithm::fmp) EXPECT_GT(gain, h.envelope[0]);
      if (algo != Algorithm::mcesp) EXPECT_EQ(h.stage, k + 1);
    }
    EXPECT_EQ(r.transforms, r.history.size());
  }
}

TEST(Learners, Deterministic) {
  const Environment env = make_environment("tiger", 2);
  for (const Algorithm algo : {Algorithm::mp, Algorithm::fmp, Algorithm::mcesp}) {
    const JointPolicy start = JointPolicy::constant(env.spec(), JointAction{4});
    const LearnerResult a = make_learner(algo, env, start, quick(0.5, 9))->run();
    const LearnerResult b = make_learner(algo, env, start, quick(0.5, 9))->run();
    EXPECT_EQ(a.policy, b.policy);
    EXPECT_EQ(a.samples, b.samples);
    EXPECT_EQ(a.history.size(), b.history.size());
    for (std::size_t k = 0; k < a.history.size(); ++k) EXPECT_EQ(a.history[k].q_to, b.history[k].q_to);
  }
}

TEST(Learners, CheckpointResumesExactly) {
  const Environment env = make_environment("tiger", 2);
  for (const Algorithm algo : {Algorithm::mp, Algorithm::fmp, Algorithm::mcesp}) {
    for (const std::uint64_t cut : {1u, 777u, 20000u}) {
      LearnerOptions o = quick(0.5, 5);
      o.phi = ExtendedReal(0.1);
      o.strategy = Strategy::random;
      const JointPolicy start = JointPolicy::constant(env.spec(), JointAction{8});
      const LearnerResult whole = make_learner(algo, env, start, o)->run();
      auto l = make_learner(algo, env, start, o);
      for (std::uint64_t k = 0; k < cut && l->step(); ++k) {
      }
      const std::string saved = l->checkpoint();
      auto resumed = restore_learner(env, saved);
      EXPECT_EQ(resumed->checkpoint(), saved) << to_string(algo);
      const LearnerResult r = resumed->run();
      EXPECT_EQ(r.policy, whole.policy) << to_string(algo) << " cut " << cut;
      EXPECT_EQ(r.samples, whole.samples);
      EXPECT_EQ(r.termination, whole.termination);
      EXPECT_EQ(r.history.size(), whole.history.size());
      EXPECT_EQ(r.pruned.size(), whole.pruned.size());
    }
  }
  const std::string other = make_learner(Algorithm::mp, make_environment("tiger", 3),
                                         JointPolicy::constant(env.spec().with_horizon(3), JointAction{0}), quick())
                                ->checkpoint();
  EXPECT_THROW(restore_learner(env, other), std::invalid_argument);
}

TEST(Learners, BudgetAndWallClock) {
  const Environment env = make_environment("tiger", 3);
  LearnerOptions o = quick(0.01);
  o.budget = 1000;
  const LearnerResult r = make_learner(Algorithm::mp, env, JointPolicy::constant(env.spec(), JointAction{0}), o)->run();
  EXPECT_EQ(r.samples, 1000u);
  EXPECT_EQ(r.termination, Termination::budget_exhausted);
  o.budget = 100'000'000;
  o.wall_clock_seconds = 0.0;
  const LearnerResult w = make_learner(Algorithm::fmp, env, JointPolicy::constant(env.spec(), JointAction{0}), o)->run();
  EXPECT_EQ(w.termination, Termination::budget_exhausted);
  EXPECT_EQ(w.samples, 4096u);
}

TEST(Learners, ProgressEventsAndHook) {
  const Environment env = toy::matrix_game(2, {{0.0, 1.0}, {1.0, 4.0}}, {0.0, 0.0}, {0.0, 0.0}, 0.9);
  std::map<std::string, int> kinds;
  LearnerOptions o = quick();
  o.progress = [&](const ProgressEvent& e) { ++kinds[std::string(e.kind)]; };
  o.progress_interval = 1000;
  int hooks = 0;
  auto l = make_learner(Algorithm::mp, env, JointPolicy::constant(env.spec(), JointAction{0}), o);
  const LearnerResult r = l->run([&](const Learner&) { ++hooks; }, 500);
  EXPECT_EQ(kinds["transform"], static_cast<int>(r.transforms));
  EXPECT_EQ(kinds["done"], 1);
  EXPECT_EQ(kinds["progress"], static_cast<int>(r.samples / 1000));
  EXPECT_EQ(hooks, static_cast<int>(r.samples / 500) + 1);
  EXPECT_TRUE(l->finished());
  EXPECT_FALSE(l->step());
}

TEST(Learners, ScheduleFollowsTheOptions) {
  const Environment env = make_environment("tiger", 5);
  LearnerOptions o;
  const auto mp = learner_schedule(Algorithm::mp, env.spec(), o);
  EXPECT_EQ(mp.neighbors(), 3060u);
  EXPECT_DOUBLE_EQ(mp.lambda(), 10.0);
  const auto fmp = learner_schedule(Algorithm::fmp, env.spec(), o);
  EXPECT_EQ(fmp.components(), 2u);
  EXPECT_EQ(fmp.neighbors(1), 1020u);
  const auto p = learner_schedule(Algorithm::mcesp, env.spec(), o, 1);
  EXPECT_EQ(p.neighbors(), 3u * 30);
  o.normalize = false;
  const auto raw = learner_schedule(Algorithm::fmp, env.spec(), o);
  EXPECT_DOUBLE_EQ(raw.lambda(0), 10.0 * env.spec().agent_reward_bounds(0).width());
  EXPECT_DOUBLE_EQ(raw.lambda(1), 10.0 * env.spec().agent_reward_bounds(1).width());
  EXPECT_THROW(parse_algorithm("sarsa"), std::invalid_argument);
  EXPECT_EQ(parse_algorithm("mces-fmp"), Algorithm::fmp);
  EXPECT_EQ(parse_termination(to_string(Termination::converged_early_dominance)), Termination::converged_early_dominance);
}
