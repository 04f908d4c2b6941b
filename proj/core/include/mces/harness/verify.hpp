#pragma once

#include <cstdint>
#include <optional>

#include "mces/env/environment.hpp"
#include "mces/env/oracle.hpp"
#include "mces/policy.hpp"

namespace mces::harness {

enum class VerifyMode { mp, fmp };

struct VerifyResult {
  bool locally_optimal = true;
  /// Largest neighbor improvement (MP: team gain; FMP: the smallest gain over
  /// agents). -inf when the policy has no neighbors.
  double worst_violation = 0.0;
  std::uint64_t neighbors_checked = 0;
  std::optional<NodeId> worst_node;
  std::optional<JointAction> worst_action;
};

/// Exact epsilon-local-optimality check. With `normalize` gains are divided
/// by the per-step reward range (team range for MP, each agent's range for
/// FMP), matching the learners' units. Throws env::OracleRefused when the
/// environment is too large.
VerifyResult verify_local_optimum(const env::Environment& env, const JointPolicy& policy, double eps, VerifyMode mode,
                                  bool normalize = true, std::uint64_t budget = env::kOracleLeafBudget);

}  // namespace mces::harness
