#pragma once

#include <cstdint>
#include <vector>

#include "mces/types.hpp"

namespace mces {

class DomainSpec;

/// Dense numbering of all observation sequences of length 0..T-1 over an
/// alphabet of `branching` symbols. Nodes are ordered by length, then by the
/// mixed-radix value of the sequence (first observation most significant), so
/// the root (empty sequence) is node 0.
class SequenceTree {
 public:
  SequenceTree(std::uint64_t branching, std::size_t horizon);
  explicit SequenceTree(const DomainSpec& spec);

  std::uint32_t size() const { return static_cast<std::uint32_t>(offsets_.back()); }
  std::uint32_t branching() const { return branching_; }
  std::size_t horizon() const { return offsets_.size() - 1; }

  static constexpr NodeId root() { return NodeId{0}; }

  std::uint32_t level_offset(std::size_t depth) const { return static_cast<std::uint32_t>(offsets_[depth]); }
  std::uint32_t level_size(std::size_t depth) const {
    return static_cast<std::uint32_t>(offsets_[depth + 1] - offsets_[depth]);
  }

  std::size_t depth(NodeId node) const;

  /// Child reached by observing `o` at a node of the given depth (< T-1).
  NodeId child(NodeId node, std::size_t depth, JointObservation o) const {
    return NodeId{static_cast<std::uint32_t>(offsets_[depth + 1] +
                                             (node.index - offsets_[depth]) * std::uint64_t{branching_} + o.index)};
  }

  /// Throws std::invalid_argument when the sequence is T or longer or a
  /// symbol is outside the alphabet.
  NodeId node_of(const JointObservationSeq& sequence) const;
  JointObservationSeq sequence_of(NodeId node) const;

  /// Prefix of length `length` of the node's sequence, as a node.
  NodeId ancestor(NodeId node, std::size_t length) const;

 private:
  std::uint32_t branching_;
  std::vector<std::uint64_t> offsets_;  // offsets_[t] = number of nodes shorter than t
};

}  // namespace mces
