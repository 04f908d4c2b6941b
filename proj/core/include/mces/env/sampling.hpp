#pragma once

#include <optional>
#include <span>
#include <vector>

#include "mces/env/environment.hpp"
#include "mces/policy.hpp"
#include "mces/rng.hpp"
#include "mces/trajectory.hpp"

namespace mces::env {

/// Action forced at one node of the policy tree (an exploring start).
struct ForcedAction {
  NodeId node;
  JointAction action;
};

/// Rolls `horizon` steps (at most the spec's horizon) following the policy
/// table. `nodes`, when given, receives the sequence node visited at each
/// step. Reuses the storage of `out`.
void rollout(const Environment& env, std::span<const JointAction> policy, std::size_t horizon, RngStream& rng,
             Trajectory& out, std::optional<ForcedAction> forced = {}, std::vector<NodeId>* nodes = nullptr);

Trajectory sample_trajectory(const Environment& env, const JointPolicy& policy, std::size_t horizon, RngStream& rng);
Trajectory sample_trajectory(const Environment& env, const PolicyVector& policy, std::size_t horizon, RngStream& rng);
Trajectory sample_trajectory(const Environment& env, const JointPolicy& policy, RngStream& rng);

/// Exploring-start rollout: the policy with `forced` applied.
Trajectory sample_with_start(const Environment& env, const JointPolicy& policy, ForcedAction forced, RngStream& rng);

}  // namespace mces::env
