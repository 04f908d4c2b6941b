#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "mces/env/environment.hpp"
#include "mces/policy.hpp"

namespace mces::env {

/// Thrown when exhaustive evaluation would exceed the enumeration budget.
class OracleRefused : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::uint64_t kOracleLeafBudget = 10'000'000;

/// (prod_i |Omega_i|)^T * |S|, saturating at UINT64_MAX.
std::uint64_t oracle_leaf_terms(const Environment& env);

struct PolicyValue {
  double team = 0.0;
  std::vector<double> agents;  // R_i + R_G returns
};

/// Exact expected returns by forward enumeration of every reachable
/// (observation history, state) branch.
PolicyValue exact_policy_values(const Environment& env, const JointPolicy& policy,
                                std::uint64_t budget = kOracleLeafBudget);
double exact_policy_value(const Environment& env, const JointPolicy& policy, std::optional<std::size_t> agent = {},
                          std::uint64_t budget = kOracleLeafBudget);
double exact_policy_value(const Environment& env, const PolicyVector& policy, std::optional<std::size_t> agent = {},
                          std::uint64_t budget = kOracleLeafBudget);

/// Exact value change of every single-entry neighbor (node, action != the
/// policy's action), team and per agent.
struct NeighborDelta {
  NodeId node;
  JointAction action;
  double team = 0.0;
  std::vector<double> agents;
};
std::vector<NeighborDelta> neighbor_value_deltas(const Environment& env, const JointPolicy& policy,
                                                 std::uint64_t budget = kOracleLeafBudget);

/// Probability that each sequence node is reached under the policy.
std::vector<double> reach_probabilities(const Environment& env, const JointPolicy& policy,
                                        std::uint64_t budget = kOracleLeafBudget);

struct MonteCarloEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t samples = 0;
};

MonteCarloEstimate monte_carlo_value(const Environment& env, const JointPolicy& policy, std::uint64_t samples,
                                     std::uint64_t seed, std::optional<std::size_t> agent = {});

}  // namespace mces::env
