#pragma once

#include <optional>

#include "mces/learn/q_table.hpp"
#include "mces/palo/schedule.hpp"

namespace mces::learn {

struct Transform {
  JointAction action;
  double advantage = 0.0;  // summed over components
};

/// Best alternative at `node` whose estimate beats the current action by the
/// envelope at equal counts; ties go to the lowest joint action.
std::optional<Transform> mp_accept(const QTable& table, NodeId node, JointAction current,
                                   const palo::PaloSchedule& schedule, const palo::Stage& stage);

/// True iff for every agent i, Q_i(candidate) > Q_i(current) + envelope_i.
/// Unequal counts give an infinite envelope and hence false.
bool fmp_accept(const QTable& table, NodeId node, JointAction current, JointAction candidate,
                const palo::PaloSchedule& schedule, const palo::Stage& stage);

/// Among candidates passing fmp_accept, the one with the largest summed
/// advantage; ties go to the lowest joint action.
std::optional<Transform> fmp_best_transform(const QTable& table, NodeId node, JointAction current,
                                            const palo::PaloSchedule& schedule, const palo::Stage& stage);

/// Early termination test at one node: every alternative a has, for MP,
/// Q(a) - Q(current) < eps - eps*(p) at equal counts p; for FMP some agent
/// satisfies that inequality for every alternative.
bool dominates(const QTable& table, NodeId node, JointAction current, const palo::PaloSchedule& schedule,
               const palo::Stage& stage);

}  // namespace mces::learn
