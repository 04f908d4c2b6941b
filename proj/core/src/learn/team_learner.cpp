#include "team_learner.hpp"

#include <algorithm>
#include <stdexcept>

#include "mces/env/sampling.hpp"
#include "mces/learn/acceptance.hpp"
#include "mces/sequence_tree.hpp"

namespace mces::learn::detail {


TeamLearner::TeamLearner(Algorithm algorithm, const env::Environment& env, const JointPolicy& initial,
                         LearnerOptions options)
    : algorithm_(algorithm), env_(&env), options_(std::move(options)), horizon_(env.spec().horizon()),
      discount_(env.spec().discount()),
      schedule_(palo::PaloSchedule::mp(1.0, 0.5, 1.0, 1)),
      explore_rng_(options_.seed, streams::exploring(0)) {
  if (algorithm == Algorithm::mcesp) throw std::invalid_argument("team learner runs mp or fmp only");
  const DomainSpec& spec = env.spec();
  if (!(options_.eps > 0.0)) throw std::invalid_argument("eps must be positive");
  const SequenceTree tree(spec);
  if (initial.size() != tree.size()) throw std::invalid_argument("initial policy does not match the environment");
  for (std::uint32_t n = 0; n < tree.size(); ++n) depth_.push_back(static_cast<std::uint8_t>(tree.depth(NodeId{n})));

  // One component for the team value, or one per agent.
  std::vector<RewardRange> ranges;
  if (fmp()) {
    for (std::size_t i = 0; i < spec.num_agents(); ++i) ranges.push_back(spec.agent_reward_bounds(i));
  } else {
    ranges.push_back(spec.team_reward_bounds());
  }
  std::vector<double> widths;
  for (const RewardRange& r : ranges) {
    if (!(r.width() > 0.0)) throw std::invalid_argument("reward range has zero width; nothing to learn");
    shift_.push_back(r.min);
    scale_.push_back(options_.normalize ? 1.0 / r.width() : 1.0);
    widths.push_back(options_.normalize ? 1.0 : r.width());
  }
  regret_range_ = *std::max_element(widths.begin(), widths.end());
  schedule_ = learner_schedule(algorithm, spec, options_);
  stage_ = schedule_.stage(1);
  neighbors_ = 0;
  for (std::size_t c = 0; c < schedule_.components(); ++c) neighbors_ = std::max(neighbors_, schedule_.neighbors(c));

  policy_.assign(initial.table().begin(), initial.table().end());
  table_ = QTable(ranges.size(), tree.size(), spec.num_joint_actions());
  starts_ = ExploringStarts(options_.strategy, spec.num_joint_actions());
  prune_ = prune::PruneState(options_.phi.value_or(ExtendedReal(0.0)), tree.size(), options_.prune_persist);
  returns_.assign(ranges.size(), 0.0);
  rebuild_active();
}

void TeamLearner::rebuild_active() {
  std::vector<NodeId> nodes;
  for (std::uint32_t n = 0; n < policy_.size(); ++n) {
    if (!prune_.is_pruned(NodeId{n})) nodes.push_back(NodeId{n});
  }
  starts_.set_active(std::move(nodes));
}

std::uint64_t TeamLearner::effective_neighbors() const {
  const DomainSpec& spec = env_->spec();
  const std::uint64_t nodes = starts_.active().size();
  std::uint64_t best = 0;
  for (std::size_t c = 0; c < schedule_.components(); ++c) {
    std::uint64_t actions = spec.num_joint_actions();
    if (fmp()) actions = spec.num_actions(c);
    const std::uint64_t n = options_.convention == NeighborhoodConvention::verbatim ? actions * (nodes - 1)
                                                                                      : (actions - 1) * nodes;
    best = std::max(best, n);
  }
  return best;
}

void TeamLearner::stop(Termination reason) {
  if (termination_) return;
  termination_ = reason;
  emit("done");
}

void TeamLearner::emit(std::string_view kind) const {
  if (!options_.progress) return;
  ProgressEvent e;
  e.kind = kind;
  e.samples = samples_;
  e.transforms = transforms_;
  e.k_m = stage_.k_m;
  e.value_estimate = table_.q(0, SequenceTree::root(), policy_[0]);
  options_.progress(e);
}

bool TeamLearner::step() {
  if (termination_) return false;
  if (samples_ >= options_.budget) {
    stop(Termination::budget_exhausted);
    return false;
  }
  StartPair pick;
  for (;;) {
    if (starts_.round_complete()) {
      end_round();
      if (termination_) return false;
    }
    pick = starts_.next(explore_rng_);
    if (table_.count(pick.node, pick.action) < stage_.k_m) break;
  }
  fold(pick);
  if (!try_accept(pick.node) && starts_.round_complete()) end_round();
  if (options_.progress && options_.progress_interval > 0 && samples_ % options_.progress_interval == 0) emit("progress");
  return !termination_;
}

void TeamLearner::fold(const StartPair& pick) {
  RngStream rng(options_.seed, streams::trajectory(samples_));
  env::rollout(*env_, policy_, horizon_, rng, trajectory_, env::ForcedAction{pick.node, pick.action}, &visited_);
  ++samples_;
  if (options_.phi) prune_.observe(visited_);

  // A trajectory that never reaches the node contributes zero, so Q is
  // E[1{node reached} R_post]: neighbors at one node then differ by exactly
  // their difference in policy value.
  const std::size_t d = depth_[pick.node.index];
  const bool reached = visited_.size() > d && visited_[d] == pick.node;
  for (std::size_t c = 0; c < returns_.size(); ++c) {
    double sum = 0.0;
    if (reached) {
      double weight = 1.0;
      for (std::size_t t = 0; t < d; ++t) weight *= discount_;
      for (std::size_t t = d; t < horizon_; ++t) {
        const double r = fmp() ? trajectory_.local_reward(t, c) + trajectory_.global_reward(t) : trajectory_.team_reward(t);
        sum += weight * (r - shift_[c]) * scale_[c];
        weight *= discount_;
      }
    }
    returns_[c] = sum;
  }
  table_.update(pick.node, pick.action, returns_);
}

bool TeamLearner::try_accept(NodeId node) {
  const JointAction current = policy_[node.index];
  const std::optional<Transform> t = fmp() ? fmp_best_transform(table_, node, current, schedule_, stage_)
                                           : mp_accept(table_, node, current, schedule_, stage_);
  if (!t) return false;

  TransformRecord rec;
  rec.stage = stage_.m;
  rec.node = node;
  rec.from = current;
  rec.to = t->action;
  rec.samples = samples_;
  rec.count = table_.count(node, current);
  for (std::size_t c = 0; c < table_.components(); ++c) {
    rec.q_from.push_back(table_.q(c, node, current));
    rec.q_to.push_back(table_.q(c, node, t->action));
    rec.envelope.push_back(schedule_.envelope(stage_, rec.count, table_.count(node, t->action), c).value());
  }
  history_.push_back(std::move(rec));

  policy_[node.index] = t->action;
  ++transforms_;
  table_.reset();
  prune_.on_transform();
  stage_ = schedule_.stage(transforms_ + 1);
  rebuild_active();
  emit("transform");
  return true;
}

void TeamLearner::end_round() {
  starts_.rewind();
  if (options_.phi) {
    bool changed = false;
    for (std::uint32_t n = 1; n < policy_.size(); ++n) {
      changed |= prune_.maybe_prune(NodeId{n}, depth_[n], stage_.k_m, horizon_, regret_range_);
    }
    if (changed) rebuild_active();
  }
  bool swept = true;
  for (const NodeId n : starts_.active()) {
    for (std::uint32_t a = 0; a < table_.actions() && swept; ++a) swept = table_.count(n, JointAction{a}) >= stage_.k_m;
  }
  if (swept) {
    stop(Termination::converged_full_sweep);
    return;
  }
  if (options_.early_dominance) {
    bool all = true;
    for (const NodeId n : starts_.active()) {
      if (!dominates(table_, n, policy_[n.index], schedule_, stage_)) {
        all = false;
        break;
      }
    }
    if (all) stop(Termination::converged_early_dominance);
  }
}

LearnerResult TeamLearner::result() const {
  LearnerResult r;
  r.algorithm = algorithm_;
  r.policy = JointPolicy(env_->spec(), policy_);
  r.transforms = transforms_;
  r.samples = samples_;
  r.termination = termination_.value_or(Termination::budget_exhausted);
  r.k_m = stage_.k_m;
  r.neighbors = neighbors_;
  r.effective_neighbors = effective_neighbors();
  r.history = history_;
  r.pruned = prune_.pruned();
  return r;
}

std::string TeamLearner::checkpoint() const {
  json j = checkpoint_header(algorithm_, *env_, options_);
  std::vector<std::uint32_t> policy;
  for (const JointAction a : policy_) policy.push_back(a.index);
  std::vector<std::uint32_t> active;
  for (const NodeId n : starts_.active()) active.push_back(n.index);
  json pruned = json::array();
  for (const auto& e : prune_.pruned()) pruned.push_back(to_json(e));
  json history = json::array();
  for (const auto& h : history_) history.push_back(to_json(h));
  j["transforms"] = transforms_;
  j["samples"] = samples_;
  j["policy"] = policy;
  j["q"] = table_.q_values();
  j["counts"] = table_.counts();
  j["active"] = active;
  j["position"] = starts_.position();
  j["explore_draws"] = explore_rng_.draws();
  j["prune"] = {{"counts", prune_.counts()}, {"trajectories", prune_.trajectories()}, {"pruned", pruned}};
  j["history"] = history;
  j["termination"] = termination_ ? json(std::string(to_string(*termination_))) : json(nullptr);
  return j.dump(1);
}

std::unique_ptr<TeamLearner> TeamLearner::restore(const env::Environment& env, const json& j, LearnerOptions options) {
  const Algorithm algorithm = parse_algorithm(j.at("algorithm").get<std::string>());
  std::vector<JointAction> table;
  for (const auto a : j.at("policy").get<std::vector<std::uint32_t>>()) table.push_back(JointAction{a});
  auto out = std::make_unique<TeamLearner>(algorithm, env, JointPolicy(env.spec(), std::move(table)), std::move(options));
  TeamLearner& l = *out;
  l.transforms_ = j.at("transforms").get<std::uint64_t>();
  l.samples_ = j.at("samples").get<std::uint64_t>();
  l.stage_ = l.schedule_.stage(l.transforms_ + 1);
  l.table_.restore(j.at("q").get<std::vector<double>>(), j.at("counts").get<std::vector<std::uint64_t>>());
  std::vector<prune::PrunedEntry> pruned;
  for (const auto& e : j.at("prune").at("pruned")) pruned.push_back(pruned_from_json(e));
  l.prune_.restore(j.at("prune").at("counts").get<std::vector<std::uint64_t>>(),
                   j.at("prune").at("trajectories").get<std::uint64_t>(), std::move(pruned));
  std::vector<NodeId> active;
  for (const auto n : j.at("active").get<std::vector<std::uint32_t>>()) active.push_back(NodeId{n});
  l.starts_.set_active(std::move(active));
  l.starts_.set_position(j.at("position").get<std::uint64_t>());
  l.explore_rng_.discard(j.at("explore_draws").get<std::uint64_t>());
  for (const auto& h : j.at("history")) l.history_.push_back(transform_from_json(h));
  if (!j.at("termination").is_null()) l.termination_ = parse_termination(j.at("termination").get<std::string>());
  return out;
}

}  // namespace mces::learn::detail
