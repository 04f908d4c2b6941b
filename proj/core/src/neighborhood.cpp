#include "mces/neighborhood.hpp"

#include "mces/checked_math.hpp"

namespace mces {

std::uint64_t sequence_node_count(const DomainSpec& spec) {
  // Horner form of the geometric sum; also covers a single joint observation.
  const std::uint64_t omega = spec.num_joint_observations();
  std::uint64_t total = 0;
  for (std::size_t t = 0; t < spec.horizon(); ++t) total = checked_add(checked_mul(total, omega), 1);
  return total;
}

namespace {

std::uint64_t count(std::uint64_t actions, const DomainSpec& spec, NeighborhoodConvention convention) {
  const std::uint64_t nodes = sequence_node_count(spec);
  if (convention == NeighborhoodConvention::verbatim) return checked_mul(actions, nodes - 1);
  return checked_mul(actions - 1, nodes);
}

}  // namespace

std::uint64_t neighbor_count_mp(const DomainSpec& spec, NeighborhoodConvention convention) {
  std::uint64_t actions = 1;
  for (std::size_t i = 0; i < spec.num_agents(); ++i) actions = checked_mul(actions, spec.num_actions(i));
  return count(actions, spec, convention);
}

std::uint64_t neighbor_count_fmp(const DomainSpec& spec, std::size_t agent, NeighborhoodConvention convention) {
  return count(spec.num_actions(agent), spec, convention);
}

}  // namespace mces
