#pragma once

#include <cstdint>

#include "mces/domain.hpp"

namespace mces {

/// How the neighborhood size is counted.
///  - verbatim: |A| * (sum_{t<T} |Omega|^t - 1), the published count.
///  - alternatives_per_node: (|A| - 1) * sum_{t<T} |Omega|^t, the number of
///    single-entry changes a dense policy table actually admits.
enum class NeighborhoodConvention { verbatim, alternatives_per_node };

/// sum_{t=0}^{T-1} (prod_i |Omega_i|)^t, exact; throws std::overflow_error.
std::uint64_t sequence_node_count(const DomainSpec& spec);

/// Neighborhood size of a joint policy. Exact integer arithmetic; throws
/// std::overflow_error instead of wrapping.
std::uint64_t neighbor_count_mp(const DomainSpec& spec,
                                NeighborhoodConvention convention = NeighborhoodConvention::verbatim);

/// Neighborhood size of one agent's policy in a policy vector.
std::uint64_t neighbor_count_fmp(const DomainSpec& spec, std::size_t agent,
                                 NeighborhoodConvention convention = NeighborhoodConvention::verbatim);

}  // namespace mces
