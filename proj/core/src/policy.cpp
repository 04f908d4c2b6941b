#include "mces/policy.hpp"

#include <stdexcept>

namespace mces {

JointPolicy::JointPolicy(const DomainSpec& spec, std::vector<JointAction> table) : table_(std::move(table)) {
  const SequenceTree tree(spec);
  if (table_.size() != tree.size()) throw std::invalid_argument("joint policy table does not cover every sequence");
  for (const JointAction a : table_) {
    if (a.index >= spec.num_joint_actions()) throw std::out_of_range("joint policy entry outside the action alphabet");
  }
}

JointPolicy JointPolicy::constant(const DomainSpec& spec, JointAction action) {
  return JointPolicy(spec, std::vector<JointAction>(SequenceTree(spec).size(), action));
}

JointPolicy JointPolicy::random(const DomainSpec& spec, RngStream& rng) {
  std::vector<JointAction> table(SequenceTree(spec).size());
  for (auto& a : table) a = JointAction{static_cast<std::uint32_t>(rng.below(spec.num_joint_actions()))};
  return JointPolicy(spec, std::move(table));
}

PolicyVector::PolicyVector(const DomainSpec& spec, std::vector<std::vector<std::uint32_t>> per_agent)
    : policies_(std::move(per_agent)) {
  if (policies_.size() != spec.num_agents()) throw std::invalid_argument("policy vector needs one policy per agent");
  const std::uint32_t nodes = SequenceTree(spec).size();
  for (std::size_t i = 0; i < policies_.size(); ++i) {
    if (policies_[i].size() != nodes) throw std::invalid_argument("agent policy does not cover every sequence");
    for (const std::uint32_t a : policies_[i]) {
      if (a >= spec.num_actions(i)) throw std::out_of_range("agent policy entry outside the action alphabet");
    }
  }
}

PolicyVector PolicyVector::from_joint(const DomainSpec& spec, const JointPolicy& joint) {
  std::vector<std::vector<std::uint32_t>> per_agent(spec.num_agents(), std::vector<std::uint32_t>(joint.size()));
  for (std::uint32_t n = 0; n < joint.size(); ++n) {
    for (std::size_t i = 0; i < spec.num_agents(); ++i) per_agent[i][n] = spec.agent_action(joint.action(NodeId{n}), i);
  }
  return PolicyVector(spec, std::move(per_agent));
}

JointAction PolicyVector::joint_action(const DomainSpec& spec, NodeId node) const {
  std::uint64_t index = 0;
  const MixedRadix& radix = spec.joint_actions();
  for (std::size_t i = 0; i < policies_.size(); ++i) index = radix.with_digit(index, i, policies_[i][node.index]);
  return JointAction{static_cast<std::uint32_t>(index)};
}

JointPolicy PolicyVector::to_joint(const DomainSpec& spec) const {
  std::vector<JointAction> table(size());
  for (std::uint32_t n = 0; n < size(); ++n) table[n] = joint_action(spec, NodeId{n});
  return JointPolicy(spec, std::move(table));
}

JointPolicy transform_policy(const JointPolicy& policy, NodeId node, JointAction action) {
  if (node.index >= policy.size()) throw std::invalid_argument("transform at a node outside the policy");
  JointPolicy out;
  out.table_ = policy.table_;
  out.table_[node.index] = action;
  return out;
}

JointPolicy transform_policy(const DomainSpec& spec, const JointPolicy& policy, const JointObservationSeq& sequence,
                             JointAction action) {
  if (action.index >= spec.num_joint_actions()) throw std::out_of_range("joint action outside the alphabet");
  return transform_policy(policy, SequenceTree(spec).node_of(sequence), action);
}

PolicyVector transform_policy(const DomainSpec& spec, const PolicyVector& policy, NodeId node, JointAction action) {
  if (node.index >= policy.size()) throw std::invalid_argument("transform at a node outside the policy");
  if (action.index >= spec.num_joint_actions()) throw std::out_of_range("joint action outside the alphabet");
  PolicyVector out;
  out.policies_ = policy.policies_;
  for (std::size_t i = 0; i < out.policies_.size(); ++i) out.policies_[i][node.index] = spec.agent_action(action, i);
  return out;
}

PolicyVector transform_policy(const DomainSpec& spec, const PolicyVector& policy, const JointObservationSeq& sequence,
                              JointAction action) {
  return transform_policy(spec, policy, SequenceTree(spec).node_of(sequence), action);
}

}  // namespace mces
