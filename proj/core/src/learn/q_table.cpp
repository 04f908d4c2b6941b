#include "mces/learn/q_table.hpp"

#include <algorithm>
#include <stdexcept>

namespace mces::learn {

QTable::QTable(std::size_t components, std::uint32_t nodes, std::uint32_t actions)
    : components_(components), nodes_(nodes), actions_(actions),
      q_(components * nodes * std::size_t{actions}, 0.0), counts_(nodes * std::size_t{actions}, 0) {}

void QTable::update(NodeId node, JointAction a, std::span<const double> returns) {
  std::uint64_t& c = counts_[node.index * std::size_t{actions_} + a.index];
  for (std::size_t k = 0; k < components_; ++k) {
    double& q = q_[index(k, node, a)];
    q = q_update(q, c, returns[k]).q;
  }
  ++c;
}

void QTable::reset() {
  std::fill(q_.begin(), q_.end(), 0.0);
  std::fill(counts_.begin(), counts_.end(), 0);
}

void QTable::restore(std::vector<double> q, std::vector<std::uint64_t> counts) {
  if (q.size() != q_.size() || counts.size() != counts_.size()) throw std::invalid_argument("Q table restore: size mismatch");
  q_ = std::move(q);
  counts_ = std::move(counts);
}

std::uint64_t aggregate_count(const DomainSpec& spec, const QTable& table, std::size_t agent, NodeId node,
                              std::uint32_t action) {
  std::uint64_t total = 0;
  for (std::uint32_t a = 0; a < table.actions(); ++a) {
    if (spec.agent_action(JointAction{a}, agent) == action) total += table.count(node, JointAction{a});
  }
  return total;
}

}  // namespace mces::learn
