#include "mces/sequence_tree.hpp"

#include <limits>
#include <stdexcept>

#include "mces/checked_math.hpp"
#include "mces/domain.hpp"

namespace mces {

SequenceTree::SequenceTree(std::uint64_t branching, std::size_t horizon) {
  if (branching == 0 || branching > std::numeric_limits<std::uint32_t>::max()) {
    throw std::invalid_argument("sequence tree: bad branching factor");
  }
  if (horizon == 0) throw std::invalid_argument("sequence tree: horizon must be positive");
  branching_ = static_cast<std::uint32_t>(branching);
  offsets_.reserve(horizon + 1);
  offsets_.push_back(0);
  std::uint64_t level = 1;
  for (std::size_t t = 0; t < horizon; ++t) {
    offsets_.push_back(checked_add(offsets_.back(), level));
    if (t + 1 < horizon) level = checked_mul(level, branching);
  }
  if (offsets_.back() > std::numeric_limits<std::uint32_t>::max()) {
    throw std::overflow_error("sequence tree: too many nodes for 32-bit ids");
  }
}

SequenceTree::SequenceTree(const DomainSpec& spec) : SequenceTree(spec.num_joint_observations(), spec.horizon()) {}

std::size_t SequenceTree::depth(NodeId node) const {
  if (node.index >= size()) throw std::out_of_range("sequence tree: node out of range");
  std::size_t t = 0;
  while (offsets_[t + 1] <= node.index) ++t;
  return t;
}

NodeId SequenceTree::node_of(const JointObservationSeq& sequence) const {
  if (sequence.size() >= horizon()) throw std::invalid_argument("observation sequence must be shorter than the horizon");
  NodeId node = root();
  for (std::size_t t = 0; t < sequence.size(); ++t) {
    if (sequence[t].index >= branching_) throw std::invalid_argument("joint observation outside the alphabet");
    node = child(node, t, sequence[t]);
  }
  return node;
}

JointObservationSeq SequenceTree::sequence_of(NodeId node) const {
  const std::size_t t = depth(node);
  JointObservationSeq out(t);
  std::uint64_t rel = node.index - offsets_[t];
  for (std::size_t k = t; k-- > 0;) {
    out[k] = JointObservation{static_cast<std::uint32_t>(rel % branching_)};
    rel /= branching_;
  }
  return out;
}

NodeId SequenceTree::ancestor(NodeId node, std::size_t length) const {
  std::size_t t = depth(node);
  if (length > t) throw std::invalid_argument("ancestor longer than the node's sequence");
  std::uint64_t rel = node.index - offsets_[t];
  for (; t > length; --t) rel /= branching_;
  return NodeId{static_cast<std::uint32_t>(offsets_[length] + rel)};
}

}  // namespace mces
