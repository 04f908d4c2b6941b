#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "mces/domain.hpp"
#include "mces/extended_real.hpp"
#include "mces/types.hpp"

namespace mces::prune {

/// 0 once a sequence has been seen at least k_m / 2 times, +inf before.
ExtendedReal rho(std::uint64_t count, std::uint64_t k_m);

/// p_hat * 2 (T - length) * range: likelihood times the value range of the
/// steps that remain after the sequence.
double sequence_regret(std::size_t length, double p_hat, std::size_t horizon, double range);
/// Same with the spec's team reward range.
double sequence_regret(const JointObservationSeq& sequence, double p_hat, const DomainSpec& spec);

struct PrunedEntry {
  NodeId node;
  double regret = 0.0;
  std::uint64_t count = 0;
  double probability = 0.0;
};

/// Regret-bounded set of pruned sequence nodes together with the
/// occurrence counts that feed its estimates.
class PruneState {
 public:
  PruneState() = default;
  PruneState(ExtendedReal phi, std::uint32_t num_nodes, bool persist_across_transforms = false);

  const ExtendedReal& phi() const { return phi_; }
  bool persist_across_transforms() const { return persist_; }

  /// Counts one trajectory that visited `nodes`.
  void observe(std::span<const NodeId> nodes);
  std::uint64_t count(NodeId node) const { return counts_[node.index]; }
  std::uint64_t trajectories() const { return trajectories_; }
  double probability(NodeId node) const;

  bool is_pruned(NodeId node) const { return pruned_flag_[node.index] != 0; }
  const std::vector<PrunedEntry>& pruned() const { return pruned_; }
  double cumulative_regret() const { return cumulative_; }

  /// Prunes `node` (a sequence of length `depth`) iff
  /// cumulative + regret + rho < phi; ties are rejected.
  bool maybe_prune(NodeId node, std::size_t depth, std::uint64_t k_m, std::size_t horizon, double range);

  /// Called when a transform is accepted: clears counts, and the pruned set
  /// unless it persists across transforms.
  void on_transform();

  // Raw state, for checkpoints.
  const std::vector<std::uint64_t>& counts() const { return counts_; }
  void restore(std::vector<std::uint64_t> counts, std::uint64_t trajectories, std::vector<PrunedEntry> pruned);

 private:
  ExtendedReal phi_{0.0};
  bool persist_ = false;
  std::vector<std::uint64_t> counts_;
  std::uint64_t trajectories_ = 0;
  std::vector<std::uint8_t> pruned_flag_;
  std::vector<PrunedEntry> pruned_;
  double cumulative_ = 0.0;
};

/// Functional form: returns the updated state and whether `node` was added.
std::pair<PruneState, bool> maybe_prune(PruneState state, NodeId node, std::size_t depth, std::uint64_t k_m,
                                        std::size_t horizon, double range);

}  // namespace mces::prune
