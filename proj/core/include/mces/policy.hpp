#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mces/domain.hpp"
#include "mces/rng.hpp"
#include "mces/sequence_tree.hpp"
#include "mces/types.hpp"

namespace mces {

/// Deterministic history-based team policy: a total table from every joint
/// observation sequence of length 0..T-1 to a joint action.
class JointPolicy {
 public:
  /// Empty table, a placeholder until a real policy is assigned.
  JointPolicy() = default;
  /// Validates table size against the spec's sequence tree and every entry
  /// against the joint-action alphabet.
  JointPolicy(const DomainSpec& spec, std::vector<JointAction> table);

  static JointPolicy constant(const DomainSpec& spec, JointAction action);
  /// Independent uniform joint action at every node.
  static JointPolicy random(const DomainSpec& spec, RngStream& rng);

  JointAction action(NodeId node) const { return table_[node.index]; }
  std::uint32_t size() const { return static_cast<std::uint32_t>(table_.size()); }
  std::span<const JointAction> table() const { return table_; }

  friend bool operator==(const JointPolicy&, const JointPolicy&) = default;

 private:
  friend JointPolicy transform_policy(const JointPolicy&, NodeId, JointAction);

  std::vector<JointAction> table_;
};

/// One policy per agent, each mapping joint observation sequences to that
/// agent's own action.
class PolicyVector {
 public:
  PolicyVector(const DomainSpec& spec, std::vector<std::vector<std::uint32_t>> per_agent);

  static PolicyVector from_joint(const DomainSpec& spec, const JointPolicy& joint);
  JointPolicy to_joint(const DomainSpec& spec) const;

  std::size_t num_agents() const { return policies_.size(); }
  std::uint32_t size() const { return policies_.empty() ? 0 : static_cast<std::uint32_t>(policies_[0].size()); }
  std::uint32_t action(std::size_t agent, NodeId node) const { return policies_[agent][node.index]; }
  std::span<const std::uint32_t> policy(std::size_t agent) const { return policies_[agent]; }
  JointAction joint_action(const DomainSpec& spec, NodeId node) const;

  friend bool operator==(const PolicyVector&, const PolicyVector&) = default;

 private:
  PolicyVector() = default;
  friend PolicyVector transform_policy(const DomainSpec&, const PolicyVector&, NodeId, JointAction);

  std::vector<std::vector<std::uint32_t>> policies_;
};

/// Copy of `policy` prescribing `action` at `node`; the input is untouched.
JointPolicy transform_policy(const JointPolicy& policy, NodeId node, JointAction action);
JointPolicy transform_policy(const DomainSpec& spec, const JointPolicy& policy, const JointObservationSeq& sequence,
                             JointAction action);

/// Copy where every agent i prescribes component a_i of `action` at `node`.
PolicyVector transform_policy(const DomainSpec& spec, const PolicyVector& policy, NodeId node, JointAction action);
PolicyVector transform_policy(const DomainSpec& spec, const PolicyVector& policy, const JointObservationSeq& sequence,
                              JointAction action);

}  // namespace mces
