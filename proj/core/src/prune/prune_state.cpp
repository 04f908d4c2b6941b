#include "mces/prune/prune_state.hpp"

#include <algorithm>
#include <stdexcept>

namespace mces::prune {

ExtendedReal rho(std::uint64_t count, std::uint64_t k_m) {
  return 2 * count >= k_m ? ExtendedReal(0.0) : ExtendedReal::infinity();
}

double sequence_regret(std::size_t length, double p_hat, std::size_t horizon, double range) {
  if (length >= horizon) throw std::invalid_argument("sequence is not shorter than the horizon");
  return p_hat * 2.0 * static_cast<double>(horizon - length) * range;
}

double sequence_regret(const JointObservationSeq& sequence, double p_hat, const DomainSpec& spec) {
  return sequence_regret(sequence.size(), p_hat, spec.horizon(), spec.team_reward_bounds().width());
}

PruneState::PruneState(ExtendedReal phi, std::uint32_t num_nodes, bool persist_across_transforms)
    : phi_(phi), persist_(persist_across_transforms), counts_(num_nodes, 0), pruned_flag_(num_nodes, 0) {
  if (phi_ < ExtendedReal(0.0)) throw std::invalid_argument("regret budget phi must be nonnegative");
}

void PruneState::observe(std::span<const NodeId> nodes) {
  ++trajectories_;
  for (const NodeId n : nodes) ++counts_[n.index];
}

double PruneState::probability(NodeId node) const {
  return trajectories_ == 0 ? 0.0 : static_cast<double>(counts_[node.index]) / static_cast<double>(trajectories_);
}

bool PruneState::maybe_prune(NodeId node, std::size_t depth, std::uint64_t k_m, std::size_t horizon, double range) {
  if (is_pruned(node)) return false;
  const double p_hat = probability(node);
  const ExtendedReal r = ExtendedReal(sequence_regret(depth, p_hat, horizon, range)) + rho(count(node), k_m);
  const ExtendedReal total = ExtendedReal(cumulative_) + r;
  if (!(total < phi_)) return false;
  cumulative_ = total.value();
  pruned_flag_[node.index] = 1;
  pruned_.push_back({node, r.value(), count(node), p_hat});
  return true;
}

void PruneState::on_transform() {
  std::fill(counts_.begin(), counts_.end(), 0);
  trajectories_ = 0;
  if (!persist_) {
    std::fill(pruned_flag_.begin(), pruned_flag_.end(), 0);
    pruned_.clear();
    cumulative_ = 0.0;
  }
}

void PruneState::restore(std::vector<std::uint64_t> counts, std::uint64_t trajectories, std::vector<PrunedEntry> pruned) {
  if (counts.size() != counts_.size()) throw std::invalid_argument("prune state restore: wrong node count");
  counts_ = std::move(counts);
  trajectories_ = trajectories;
  std::fill(pruned_flag_.begin(), pruned_flag_.end(), 0);
  cumulative_ = 0.0;
  for (const auto& e : pruned) {
    pruned_flag_.at(e.node.index) = 1;
    cumulative_ += e.regret;
  }
  pruned_ = std::move(pruned);
}

std::pair<PruneState, bool> maybe_prune(PruneState state, NodeId node, std::size_t depth, std::uint64_t k_m,
                                        std::size_t horizon, double range) {
  const bool added = state.maybe_prune(node, depth, k_m, horizon, range);
  return {std::move(state), added};
}

}  // namespace mces::prune
