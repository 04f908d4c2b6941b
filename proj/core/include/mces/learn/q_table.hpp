#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mces/domain.hpp"
#include "mces/types.hpp"

namespace mces::learn {

struct QUpdate {
  double q;
  std::uint64_t count;
};

/// Averaging update with learning rate 1/(c+1); after n folds from (0, 0)
/// q is the mean of the n returns.
constexpr QUpdate q_update(double q, std::uint64_t c, double r) {
  const double alpha = 1.0 / static_cast<double>(c + 1);
  return {(1.0 - alpha) * q + alpha * r, c + 1};
}

/// Q estimates keyed (component, node, joint action) with one sample count
/// per (node, joint action). MP tables have one component; FMP tables one
/// per agent, which is the (agent, o, a_i, a_-i) keying written out.
class QTable {
 public:
  QTable() = default;
  QTable(std::size_t components, std::uint32_t nodes, std::uint32_t actions);

  std::size_t components() const { return components_; }
  std::uint32_t nodes() const { return nodes_; }
  std::uint32_t actions() const { return actions_; }

  double q(std::size_t component, NodeId node, JointAction a) const { return q_[index(component, node, a)]; }
  std::uint64_t count(NodeId node, JointAction a) const { return counts_[node.index * std::size_t{actions_} + a.index]; }

  /// Folds one return per component into entry (node, a).
  void update(NodeId node, JointAction a, std::span<const double> returns);
  void reset();

  const std::vector<double>& q_values() const { return q_; }
  const std::vector<std::uint64_t>& counts() const { return counts_; }
  void restore(std::vector<double> q, std::vector<std::uint64_t> counts);

 private:
  std::size_t index(std::size_t component, NodeId node, JointAction a) const {
    return (component * nodes_ + node.index) * std::size_t{actions_} + a.index;
  }

  std::size_t components_ = 0;
  std::uint32_t nodes_ = 0;
  std::uint32_t actions_ = 0;
  std::vector<double> q_;
  std::vector<std::uint64_t> counts_;
};

/// Samples behind agent i's own action a_i at a node: the sum of the joint
/// entry counts whose i-th component is a_i.
std::uint64_t aggregate_count(const DomainSpec& spec, const QTable& table, std::size_t agent, NodeId node,
                              std::uint32_t action);

}  // namespace mces::learn
