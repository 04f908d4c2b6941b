#include "mces/learn/learner.hpp"

#include <chrono>
#include <stdexcept>
#include <string>

#include "serialize.hpp"
#include "team_learner.hpp"
#include "mces_p.hpp"

#include "mces/sequence_tree.hpp"

namespace mces::learn {

std::string_view to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::mp: return "mp";
    case Algorithm::fmp: return "fmp";
    case Algorithm::mcesp: return "mcesp";
  }
  return "?";
}

std::string_view to_string(Termination termination) {
  switch (termination) {
    case Termination::converged_full_sweep: return "converged-full-sweep";
    case Termination::converged_early_dominance: return "converged-early-dominance";
    case Termination::budget_exhausted: return "budget-exhausted";
  }
  return "?";
}

Algorithm parse_algorithm(std::string_view text) {
  if (text == "mp" || text == "mces-mp") return Algorithm::mp;
  if (text == "fmp" || text == "mces-fmp") return Algorithm::fmp;
  if (text == "mcesp" || text == "mces-p") return Algorithm::mcesp;
  throw std::invalid_argument("unknown algorithm '" + std::string(text) + "' (expected mp, fmp or mcesp)");
}

Termination parse_termination(std::string_view text) {
  for (const auto t : {Termination::converged_full_sweep, Termination::converged_early_dominance,
                       Termination::budget_exhausted}) {
    if (to_string(t) == text) return t;
  }
  throw std::invalid_argument("unknown termination reason '" + std::string(text) + "'");
}

LearnerResult Learner::run(const std::function<void(const Learner&)>& hook, std::uint64_t hook_every) {
  const auto start = std::chrono::steady_clock::now();
  const std::optional<double> cap = options().wall_clock_seconds;
  std::uint64_t steps = 0;
  while (step()) {
    ++steps;
    if (hook && hook_every > 0 && steps % hook_every == 0) hook(*this);
    if (cap && (steps & 0xfff) == 0) {
      const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
      if (elapsed.count() > *cap) {
        stop(Termination::budget_exhausted);
        break;
      }
    }
  }
  if (hook) hook(*this);
  return result();
}

palo::PaloSchedule learner_schedule(Algorithm algorithm, const DomainSpec& spec, const LearnerOptions& o,
                                    std::size_t agent) {
  const std::uint64_t T = spec.horizon();
  const auto lambda = [&](RewardRange r) {
    if (!(r.width() > 0.0)) throw std::invalid_argument("reward range has zero width; nothing to learn");
    return palo::lambda_bound(o.normalize ? 1.0 : r.width(), 0.0, T);
  };
  switch (algorithm) {
    case Algorithm::mp:
      return palo::PaloSchedule::mp(o.eps, o.delta, lambda(spec.team_reward_bounds()),
                                    neighbor_count_mp(spec, o.convention));
    case Algorithm::fmp: {
      std::vector<double> lambdas;
      std::vector<std::uint64_t> neighbors;
      for (std::size_t i = 0; i < spec.num_agents(); ++i) {
        lambdas.push_back(lambda(spec.agent_reward_bounds(i)));
        neighbors.push_back(neighbor_count_fmp(spec, i, o.convention));
      }
      return palo::PaloSchedule::fmp(o.eps, o.delta, std::move(lambdas), std::move(neighbors), o.grouping);
    }
    case Algorithm::mcesp: {
      const std::uint64_t actions = spec.num_actions(agent);
      const std::uint64_t nodes = SequenceTree(spec.num_observations(agent), T).size();
      const std::uint64_t neighbors =
          o.convention == NeighborhoodConvention::verbatim ? actions * (nodes - 1) : (actions - 1) * nodes;
      return palo::PaloSchedule::mp(o.eps, o.delta, lambda(spec.agent_reward_bounds(agent)), neighbors);
    }
  }
  throw std::invalid_argument("unknown algorithm");
}

std::unique_ptr<Learner> make_learner(Algorithm algorithm, const env::Environment& env, const JointPolicy& initial,
                                      LearnerOptions options) {
  if (algorithm == Algorithm::mcesp) return std::make_unique<detail::McesPLearner>(env, initial, std::move(options));
  return std::make_unique<detail::TeamLearner>(algorithm, env, initial, std::move(options));
}

std::unique_ptr<Learner> restore_learner(const env::Environment& env, std::string_view checkpoint,
                                         LearnerOptions runtime) {
  const detail::json j = detail::json::parse(checkpoint);
  detail::check_header(j, env);
  const Algorithm algorithm = parse_algorithm(j.at("algorithm").get<std::string>());
  LearnerOptions options = detail::options_from_json(j.at("options"), runtime);
  if (algorithm == Algorithm::mcesp) return detail::McesPLearner::restore(env, j, std::move(options));
  return detail::TeamLearner::restore(env, j, std::move(options));
}

LearnerResult mces_mp_run(const env::Environment& env, const JointPolicy& initial, LearnerOptions options) {
  return make_learner(Algorithm::mp, env, initial, std::move(options))->run();
}

LearnerResult mces_fmp_run(const env::Environment& env, const JointPolicy& initial, LearnerOptions options) {
  return make_learner(Algorithm::fmp, env, initial, std::move(options))->run();
}

LearnerResult mces_p_baseline_run(const env::Environment& env, const JointPolicy& initial, LearnerOptions options) {
  return make_learner(Algorithm::mcesp, env, initial, std::move(options))->run();
}

}  // namespace mces::learn
