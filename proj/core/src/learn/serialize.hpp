#pragma once

// JSON helpers shared by the learner checkpoints.

#include <json.hpp>

#include "mces/learn/learner.hpp"

namespace mces::learn::detail {

using json = nlohmann::json;

inline constexpr int kCheckpointVersion = 1;

json to_json(const LearnerOptions& o);
LearnerOptions options_from_json(const json& j, const LearnerOptions& runtime);

json to_json(const TransformRecord& r);
TransformRecord transform_from_json(const json& j);

json to_json(const prune::PrunedEntry& e);
prune::PrunedEntry pruned_from_json(const json& j);

json extended_to_json(const ExtendedReal& x);
ExtendedReal extended_from_json(const json& j);

/// Common header; throws when the checkpoint does not belong to `env`.
json checkpoint_header(Algorithm algorithm, const env::Environment& env, const LearnerOptions& options);
void check_header(const json& j, const env::Environment& env);

}  // namespace mces::learn::detail
