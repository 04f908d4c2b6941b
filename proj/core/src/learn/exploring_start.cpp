#include "mces/learn/exploring_start.hpp"

#include <stdexcept>
#include <string>

#include "mces/sequence_tree.hpp"

namespace mces::learn {

std::string_view to_string(Strategy strategy) { return strategy == Strategy::iterated ? "iterated" : "random"; }

Strategy parse_strategy(std::string_view text) {
  if (text == "iterated") return Strategy::iterated;
  if (text == "random") return Strategy::random;
  throw std::invalid_argument("unknown exploring-start strategy '" + std::string(text) + "'");
}

ExploringStarts::ExploringStarts(Strategy strategy, std::uint32_t actions) : strategy_(strategy), actions_(actions) {
  if (actions == 0) throw std::invalid_argument("exploring starts need at least one action");
}

void ExploringStarts::set_active(std::vector<NodeId> nodes) {
  nodes_ = std::move(nodes);
  position_ = 0;
}

StartPair ExploringStarts::next(RngStream& rng) {
  if (nodes_.empty()) throw std::logic_error("exploring starts: no active nodes");
  const std::uint64_t k = strategy_ == Strategy::iterated ? position_ % pairs() : rng.below(pairs());
  ++position_;
  return {nodes_[k / actions_], JointAction{static_cast<std::uint32_t>(k % actions_)}};
}

StartPair pick_exploring_start(const DomainSpec& spec, Strategy strategy, RngStream& rng, std::uint64_t& position) {
  const std::uint64_t nodes = SequenceTree(spec).size();
  const std::uint64_t actions = spec.num_joint_actions();
  const std::uint64_t pairs = nodes * actions;
  const std::uint64_t k = strategy == Strategy::iterated ? position++ % pairs : rng.below(pairs);
  return {NodeId{static_cast<std::uint32_t>(k / actions)}, JointAction{static_cast<std::uint32_t>(k % actions)}};
}

}  // namespace mces::learn
