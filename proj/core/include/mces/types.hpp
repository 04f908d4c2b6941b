#pragma once

#include <compare>
#include <cstdint>
#include <vector>

namespace mces {

/// Mixed-radix index of a joint action (one action per agent).
struct JointAction {
  std::uint32_t index = 0;
  friend auto operator<=>(const JointAction&, const JointAction&) = default;
};

/// Mixed-radix index of a joint observation (one symbol per agent).
struct JointObservation {
  std::uint32_t index = 0;
  friend auto operator<=>(const JointObservation&, const JointObservation&) = default;
};

/// Dense index of a joint-observation sequence of length 0..T-1.
struct NodeId {
  std::uint32_t index = 0;
  friend auto operator<=>(const NodeId&, const NodeId&) = default;
};

/// Ordered joint observations; the empty sequence keys the first action.
using JointObservationSeq = std::vector<JointObservation>;

/// Local and global reward received by one agent at one step.
struct RewardTuple {
  double local = 0.0;
  double global = 0.0;
  double total() const { return local + global; }
  friend bool operator==(const RewardTuple&, const RewardTuple&) = default;
};

}  // namespace mces
