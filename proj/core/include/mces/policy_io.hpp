#pragma once

#include <string>
#include <string_view>

#include "mces/domain.hpp"
#include "mces/policy.hpp"

namespace mces {

/// Canonical text form of a joint policy:
///
///   mces-policy 1
///   kind <label>
///   agents <Z>
///   horizon <T>
///   [] => (a_1,...,a_Z)
///   [(o_1,...,o_Z)] => (a_1,...,a_Z)
///   [(o_1,...,o_Z) (o_1,...,o_Z)] => (...)
///
/// One line per sequence node, ordered by length then mixed-radix value;
/// symbols are the spec's per-agent names. The label is free text without
/// whitespace (the tools write mp, fmp or mcesp). Output ends with a newline
/// and reparses to the same table, so write(read(x)) == x byte for byte.
std::string write_policy(const DomainSpec& spec, const JointPolicy& policy, std::string_view kind = "mp");

struct ParsedPolicy {
  std::string kind;
  JointPolicy policy;
};

/// Throws std::invalid_argument with a line number on malformed input,
/// unknown symbols, duplicate or missing sequences.
ParsedPolicy read_policy(const DomainSpec& spec, std::string_view text);

std::string format_sequence(const DomainSpec& spec, const JointObservationSeq& sequence);
std::string format_joint_action(const DomainSpec& spec, JointAction action);

}  // namespace mces
