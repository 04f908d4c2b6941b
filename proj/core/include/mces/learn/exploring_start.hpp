#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "mces/domain.hpp"
#include "mces/rng.hpp"
#include "mces/types.hpp"

namespace mces::learn {

enum class Strategy { iterated, random };

std::string_view to_string(Strategy strategy);
Strategy parse_strategy(std::string_view text);

struct StartPair {
  NodeId node;
  JointAction action;
  friend bool operator==(const StartPair&, const StartPair&) = default;
};

/// Exploring-start selection over (node, action) pairs of a set of active
/// nodes. Iterated order is node-major, action-minor; random draws are
/// uniform over the same pairs.
class ExploringStarts {
 public:
  ExploringStarts() = default;
  ExploringStarts(Strategy strategy, std::uint32_t actions);

  /// Replaces the active nodes and rewinds the round.
  void set_active(std::vector<NodeId> nodes);
  const std::vector<NodeId>& active() const { return nodes_; }

  std::uint64_t pairs() const { return nodes_.size() * std::uint64_t{actions_}; }
  std::uint64_t position() const { return position_; }
  void set_position(std::uint64_t position) { position_ = position; }
  bool round_complete() const { return position_ >= pairs(); }
  void rewind() { position_ = 0; }

  /// Next pair of the current round; advances the position.
  StartPair next(RngStream& rng);

 private:
  Strategy strategy_ = Strategy::iterated;
  std::uint32_t actions_ = 1;
  std::vector<NodeId> nodes_;
  std::uint64_t position_ = 0;
};

/// One pick over all (sequence node, joint action) pairs of the spec;
/// `position` carries the round-robin state of the iterated strategy.
StartPair pick_exploring_start(const DomainSpec& spec, Strategy strategy, RngStream& rng, std::uint64_t& position);

}  // namespace mces::learn
