#include <benchmark/benchmark.h>

#include "mces/env/domains.hpp"
#include "mces/env/oracle.hpp"
#include "mces/env/sampling.hpp"
#include "mces/harness/experiment.hpp"
#include "mces/learn/learner.hpp"
#include "mces/palo/bounds.hpp"

using namespace mces;

static void BM_TigerRollout(benchmark::State& state) {
  const auto env = env::make_environment("tiger", static_cast<std::size_t>(state.range(0)));
  const JointPolicy policy = harness::initial_policy(env.spec(), 1);
  Trajectory tr;
  std::uint64_t k = 0;
  for (auto _ : state) {
    RngStream rng(1, streams::trajectory(k++));
    env::rollout(env, policy.table(), env.spec().horizon(), rng, tr);
    benchmark::DoNotOptimize(tr);
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_TigerRollout)->Arg(2)->Arg(3)->Arg(5);

static void BM_FireRollout(benchmark::State& state) {
  const auto env = env::make_environment("fire", 3);
  const JointPolicy policy = harness::initial_policy(env.spec(), 1);
  Trajectory tr;
  std::uint64_t k = 0;
  for (auto _ : state) {
    RngStream rng(1, streams::trajectory(k++));
    env::rollout(env, policy.table(), 3, rng, tr);
    benchmark::DoNotOptimize(tr);
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_FireRollout);

static void BM_ExactValue(benchmark::State& state) {
  const auto env = env::make_environment("tiger", static_cast<std::size_t>(state.range(0)));
  const JointPolicy policy = harness::initial_policy(env.spec(), 1);
  for (auto _ : state) benchmark::DoNotOptimize(env::exact_policy_values(env, policy));
}
BENCHMARK(BM_ExactValue)->Arg(2)->Arg(3)->Arg(4);

static void BM_NeighborDeltas(benchmark::State& state) {
  const auto env = env::make_environment("tiger", static_cast<std::size_t>(state.range(0)));
  const JointPolicy policy = harness::initial_policy(env.spec(), 1);
  for (auto _ : state) benchmark::DoNotOptimize(env::neighbor_value_deltas(env, policy));
}
BENCHMARK(BM_NeighborDeltas)->Arg(2)->Arg(3);

static void BM_KmFmp(benchmark::State& state) {
  std::uint64_t m = 1;
  for (auto _ : state) {
    const double dm = palo::delta_m(0.1, m);
    benchmark::DoNotOptimize(palo::k_m_fmp(6.0, 0.1, 1020, dm, 2));
    m = m % 1000 + 1;
  }
}
BENCHMARK(BM_KmFmp);

static void BM_EpsilonMp(benchmark::State& state) {
  std::uint64_t p = 1;
  const double dm = palo::delta_m(0.1, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(palo::epsilon_mp(1, p, p, 50956, 6.0, 36, dm, 0.1));
    p = p % 50000 + 1;
  }
}
BENCHMARK(BM_EpsilonMp);

static void BM_LearnerStep(benchmark::State& state) {
  const auto env = env::make_environment("tiger", 3);
  const auto algorithm = static_cast<learn::Algorithm>(state.range(0));
  learn::LearnerOptions options;
  options.seed = 1;
  options.budget = ~std::uint64_t{0};
  auto learner = learn::make_learner(algorithm, env, harness::initial_policy(env.spec(), 1), options);
  for (auto _ : state) {
    if (!learner->step()) {
      state.PauseTiming();
      learner = learn::make_learner(algorithm, env, harness::initial_policy(env.spec(), 1), options);
      state.ResumeTiming();
    }
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_LearnerStep)
    ->Arg(static_cast<int>(learn::Algorithm::mp))
    ->Arg(static_cast<int>(learn::Algorithm::fmp))
    ->Arg(static_cast<int>(learn::Algorithm::mcesp));

BENCHMARK_MAIN();
