#include "mces_p.hpp"

#include <array>
#include <stdexcept>

#include "mces/learn/acceptance.hpp"

namespace mces::learn::detail {

JointPolicy LocalPolicyProfile::to_joint(const DomainSpec& spec) const {
  const SequenceTree joint(spec);
  const std::size_t Z = spec.num_agents();
  std::vector<std::vector<std::uint32_t>> own(Z, std::vector<std::uint32_t>(joint.size(), 0));
  std::vector<JointAction> table(joint.size());
  for (std::size_t t = 0; t < spec.horizon(); ++t) {
    for (std::uint32_t n = joint.level_offset(t); n < joint.level_offset(t) + joint.level_size(t); ++n) {
      std::vector<std::uint32_t> actions(Z);
      for (std::size_t i = 0; i < Z; ++i) actions[i] = policies[i][own[i][n]];
      table[n] = spec.encode_action(actions);
      if (t + 1 == spec.horizon()) continue;
      for (std::uint32_t o = 0; o < spec.num_joint_observations(); ++o) {
        const NodeId child = joint.child(NodeId{n}, t, JointObservation{o});
        for (std::size_t i = 0; i < Z; ++i) {
          own[i][child.index] =
              trees[i].child(NodeId{own[i][n]}, t, JointObservation{spec.agent_observation(JointObservation{o}, i)}).index;
        }
      }
    }
  }
  return JointPolicy(spec, std::move(table));
}

McesPLearner::McesPLearner(const env::Environment& env, const JointPolicy& initial, LearnerOptions options)
    : env_(&env), options_(std::move(options)) {
  const DomainSpec& spec = env.spec();
  const std::size_t Z = spec.num_agents();
  if (!(options_.eps > 0.0)) throw std::invalid_argument("eps must be positive");
  if (initial.size() != SequenceTree(spec).size()) throw std::invalid_argument("initial policy does not match the environment");
  // Each agent starts from the actions the joint policy prescribes along the
  // histories where every observation is its own: agent i's local node for a
  // sequence takes the joint entry whose other components are all zero.
  for (std::size_t i = 0; i < Z; ++i) {
    SequenceTree tree(spec.num_observations(i), spec.horizon());
    std::vector<std::uint32_t> local(tree.size());
    const SequenceTree joint(spec);
    for (std::uint32_t n = 0; n < tree.size(); ++n) {
      JointObservationSeq seq;
      for (const JointObservation o : tree.sequence_of(NodeId{n})) {
        std::vector<std::uint32_t> digits(Z, 0);
        digits[i] = o.index;
        seq.push_back(spec.encode_observation(digits));
      }
      local[n] = spec.agent_action(initial.action(joint.node_of(seq)), i);
    }
    profile_.trees.push_back(tree);
    profile_.policies.push_back(std::move(local));
  }

  for (std::size_t i = 0; i < Z; ++i) {
    const SequenceTree& tree = profile_.trees[i];
    const RewardRange range = spec.agent_reward_bounds(i);
    if (!(range.width() > 0.0)) throw std::invalid_argument("reward range has zero width; nothing to learn");
    std::uint64_t actions = spec.num_actions(i);
    Agent a{.schedule = learner_schedule(Algorithm::mcesp, spec, options_, i)};
    for (std::uint32_t n = 0; n < tree.size(); ++n) a.depth.push_back(static_cast<std::uint8_t>(tree.depth(NodeId{n})));
    a.table = QTable(1, tree.size(), static_cast<std::uint32_t>(actions));
    a.starts = ExploringStarts(options_.strategy, static_cast<std::uint32_t>(actions));
    std::vector<NodeId> all;
    for (std::uint32_t n = 0; n < tree.size(); ++n) all.push_back(NodeId{n});
    a.starts.set_active(std::move(all));
    a.explore = RngStream(options_.seed, streams::exploring(i));
    a.stage = a.schedule.stage(1);
    a.shift = range.min;
    a.scale = options_.normalize ? 1.0 / range.width() : 1.0;
    agents_.push_back(std::move(a));
  }
  visited_.resize(Z);
}

void McesPLearner::stop(Termination reason) {
  if (termination_) return;
  termination_ = reason;
  emit("done");
}

void McesPLearner::emit(std::string_view kind) const {
  if (!options_.progress) return;
  ProgressEvent e;
  e.kind = kind;
  e.samples = samples_;
  for (const Agent& a : agents_) {
    e.transforms += a.transforms;
    e.k_m = std::max(e.k_m, a.stage.k_m);
  }
  const Agent& first = agents_[0];
  e.value_estimate = first.table.q(0, SequenceTree::root(), JointAction{profile_.policies[0][0]});
  options_.progress(e);
}

void McesPLearner::finish_if_done() {
  bool early = false;
  for (const Agent& a : agents_) {
    if (!a.done) return;
    early = early || *a.done == Termination::converged_early_dominance;
  }
  stop(early ? Termination::converged_early_dominance : Termination::converged_full_sweep);
}

bool McesPLearner::step() {
  if (termination_) return false;
  if (samples_ >= options_.budget) {
    stop(Termination::budget_exhausted);
    return false;
  }
  for (std::size_t i = 0; i < agents_.size(); ++i) {
    Agent& a = agents_[i];
    a.pick.reset();
    while (!a.done) {
      if (a.starts.round_complete()) {
        end_round(i);
        if (a.done) break;
      }
      const StartPair p = a.starts.next(a.explore);
      if (a.table.count(p.node, p.action) < a.stage.k_m) {
        a.pick = p;
        break;
      }
    }
  }
  finish_if_done();
  if (termination_) return false;

  rollout();
  const double g = env_->spec().discount();
  for (std::size_t i = 0; i < agents_.size(); ++i) {
    Agent& a = agents_[i];
    if (!a.pick) continue;
    const std::size_t d = a.depth[a.pick->node.index];
    double sum = 0.0;
    if (visited_[i][d] == a.pick->node) {
      double weight = 1.0;
      for (std::size_t t = 0; t < d; ++t) weight *= g;
      for (std::size_t t = d; t < trajectory_.horizon(); ++t) {
        sum += weight * (trajectory_.local_reward(t, i) + trajectory_.global_reward(t) - a.shift) * a.scale;
        weight *= g;
      }
    }
    const std::array<double, 1> r{sum};
    a.table.update(a.pick->node, a.pick->action, r);
    if (!try_accept(i, a.pick->node) && a.starts.round_complete()) end_round(i);
  }
  finish_if_done();
  if (options_.progress && options_.progress_interval > 0 && samples_ % options_.progress_interval == 0) emit("progress");
  return !termination_;
}

void McesPLearner::rollout() {
  const DomainSpec& spec = env_->spec();
  const std::size_t Z = spec.num_agents();
  const std::size_t T = spec.horizon();
  RngStream rng(options_.seed, streams::trajectory(samples_));
  ++samples_;
  trajectory_.clear(Z);
  std::vector<std::uint64_t> offset(Z, 0), rel(Z, 0);
  std::vector<std::uint32_t> actions(Z);
  std::vector<double> local(Z);
  for (auto& v : visited_) v.clear();
  env::State s = env_->sample_initial(rng);
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t i = 0; i < Z; ++i) {
      const NodeId node{static_cast<std::uint32_t>(offset[i] + rel[i])};
      visited_[i].push_back(node);
      const auto& pick = agents_[i].pick;
      actions[i] = pick && pick->node == node ? pick->action.index : profile_.policies[i][node.index];
    }
    const JointAction a = spec.encode_action(actions);
    for (std::size_t i = 0; i < Z; ++i) local[i] = env_->local_reward(s, i, actions[i]);
    trajectory_.append(a, local, env_->global_reward(s, a));
    if (t + 1 == T) break;
    s = env_->sample_next(s, a, rng);
    const JointObservation o = env_->sample_observation(s, a, rng);
    trajectory_.append_observation(o);
    for (std::size_t i = 0; i < Z; ++i) {
      offset[i] = offset[i] * spec.num_observations(i) + 1;
      rel[i] = rel[i] * spec.num_observations(i) + spec.agent_observation(o, i);
    }
  }
}

bool McesPLearner::try_accept(std::size_t i, NodeId node) {
  Agent& a = agents_[i];
  const JointAction current{profile_.policies[i][node.index]};
  const std::optional<Transform> t = mp_accept(a.table, node, current, a.schedule, a.stage);
  if (!t) return false;
  TransformRecord rec;
  rec.stage = a.stage.m;
  rec.agent = i;
  rec.node = node;
  rec.from = current;
  rec.to = t->action;
  rec.samples = samples_;
  rec.count = a.table.count(node, current);
  rec.q_from = {a.table.q(0, node, current)};
  rec.q_to = {a.table.q(0, node, t->action)};
  rec.envelope = {a.schedule.envelope(a.stage, rec.count, rec.count).value()};
  history_.push_back(std::move(rec));

  profile_.policies[i][node.index] = t->action.index;
  ++a.transforms;
  a.table.reset();
  a.stage = a.schedule.stage(a.transforms + 1);
  a.starts.rewind();
  emit("transform");
  return true;
}

void McesPLearner::end_round(std::size_t i) {
  Agent& a = agents_[i];
  a.starts.rewind();
  bool swept = true;
  for (const NodeId n : a.starts.active()) {
    for (std::uint32_t x = 0; x < a.table.actions() && swept; ++x) swept = a.table.count(n, JointAction{x}) >= a.stage.k_m;
  }
  if (swept) {
    a.done = Termination::converged_full_sweep;
    return;
  }
  if (!options_.early_dominance) return;
  for (const NodeId n : a.starts.active()) {
    if (!dominates(a.table, n, JointAction{profile_.policies[i][n.index]}, a.schedule, a.stage)) return;
  }
  a.done = Termination::converged_early_dominance;
}

LearnerResult McesPLearner::result() const {
  LearnerResult r;
  r.algorithm = Algorithm::mcesp;
  r.policy = profile_.to_joint(env_->spec());
  r.samples = samples_;
  r.termination = termination_.value_or(Termination::budget_exhausted);
  for (const Agent& a : agents_) {
    r.transforms += a.transforms;
    r.k_m = std::max(r.k_m, a.stage.k_m);
    r.neighbors = std::max(r.neighbors, a.schedule.neighbors());
  }
  r.effective_neighbors = r.neighbors;
  r.history = history_;
  return r;
}

std::string McesPLearner::checkpoint() const {
  json j = checkpoint_header(Algorithm::mcesp, *env_, options_);
  json agents = json::array();
  for (std::size_t i = 0; i < agents_.size(); ++i) {
    const Agent& a = agents_[i];
    agents.push_back({{"policy", profile_.policies[i]},
                      {"transforms", a.transforms},
                      {"q", a.table.q_values()},
                      {"counts", a.table.counts()},
                      {"position", a.starts.position()},
                      {"explore_draws", a.explore.draws()},
                      {"done", a.done ? json(std::string(to_string(*a.done))) : json(nullptr)}});
  }
  json history = json::array();
  for (const auto& h : history_) history.push_back(to_json(h));
  j["samples"] = samples_;
  j["agents"] = agents;
  j["history"] = history;
  j["termination"] = termination_ ? json(std::string(to_string(*termination_))) : json(nullptr);
  return j.dump(1);
}

std::unique_ptr<McesPLearner> McesPLearner::restore(const env::Environment& env, const json& j, LearnerOptions options) {
  const DomainSpec& spec = env.spec();
  auto out = std::make_unique<McesPLearner>(env, JointPolicy::constant(spec, JointAction{0}), std::move(options));
  McesPLearner& l = *out;
  const json& agents = j.at("agents");
  if (agents.size() != l.agents_.size()) throw std::invalid_argument("checkpoint agent count does not match");
  for (std::size_t i = 0; i < l.agents_.size(); ++i) {
    Agent& a = l.agents_[i];
    const json& ja = agents[i];
    l.profile_.policies[i] = ja.at("policy").get<std::vector<std::uint32_t>>();
    if (l.profile_.policies[i].size() != l.profile_.trees[i].size()) throw std::invalid_argument("checkpoint policy size mismatch");
    a.transforms = ja.at("transforms").get<std::uint64_t>();
    a.stage = a.schedule.stage(a.transforms + 1);
    a.table.restore(ja.at("q").get<std::vector<double>>(), ja.at("counts").get<std::vector<std::uint64_t>>());
    a.starts.set_position(ja.at("position").get<std::uint64_t>());
    a.explore.discard(ja.at("explore_draws").get<std::uint64_t>());
    if (!ja.at("done").is_null()) a.done = parse_termination(ja.at("done").get<std::string>());
  }
  l.samples_ = j.at("samples").get<std::uint64_t>();
  for (const auto& h : j.at("history")) l.history_.push_back(transform_from_json(h));
  if (!j.at("termination").is_null()) l.termination_ = parse_termination(j.at("termination").get<std::string>());
  return out;
}

}  // namespace mces::learn::detail
