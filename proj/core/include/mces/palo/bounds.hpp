#pragma once

#include <cstdint>
#include <vector>

#include "mces/extended_real.hpp"

namespace mces::palo {

/// Where the (k_m - 1) factor sits in the FMP envelope's logarithm.
///  - inside_root: ((4Z-2)(k_m-1))^(1/2Z) * N / delta_m^(1/2Z)   (default)
///  - outside_root: (4Z-2)^(1/2Z) * (k_m-1) * N / delta_m^(1/2Z)
enum class FmpGrouping { inside_root, outside_root };

/// 6 delta / (9.872 m^2); throws std::invalid_argument for m < 1 or delta
/// outside (0, 1).
double delta_m(double delta, std::uint64_t m);

/// 2 T (r_max - r_min)
double lambda_bound(double r_max, double r_min, std::uint64_t horizon);

/// ceil(2 (lambda/eps)^2 ln(2 N / delta_m)), at least 1.
std::uint64_t k_m_mp(double lambda, double eps, std::uint64_t neighbors, double delta_m);

/// ceil(2 (lambda_i/eps)^2 ln((4Z-2)^(1/2Z) N_fmp / delta_m^(1/2Z))), at least 1.
std::uint64_t k_m_fmp(double lambda_i, double eps, std::uint64_t neighbors, double delta_m, std::uint64_t agents);

/// ln(2 (k_m - 1) N / delta_m); the argument of the MP envelope's root.
double log_term_mp(std::uint64_t k_m, std::uint64_t neighbors, double delta_m);
double log_term_fmp(std::uint64_t k_m, std::uint64_t neighbors, double delta_m, std::uint64_t agents,
                    FmpGrouping grouping = FmpGrouping::inside_root);

/// lambda * sqrt(log_term / (2 p)); +inf for p = 0.
ExtendedReal envelope_from_log(double lambda, std::uint64_t p, double log_term);

/// Three-branch comparison envelope:
///   lambda sqrt(ln(2 (k_m-1) N / delta_m) / (2p))  if p = q < k_m
///   eps / 2                                        if p = q = k_m
///   +inf                                           otherwise, and for p = 0
ExtendedReal epsilon_mp(std::uint64_t m, std::uint64_t p, std::uint64_t q, std::uint64_t k_m, double lambda,
                        std::uint64_t neighbors, double delta_m, double eps);

/// First-branch FMP envelope at p samples; +inf for p = 0.
ExtendedReal epsilon_star_fmp(std::uint64_t m, std::uint64_t p, std::uint64_t k_m, double lambda_i,
                              std::uint64_t neighbors, double delta_m, std::uint64_t agents,
                              FmpGrouping grouping = FmpGrouping::inside_root);

/// epsilon_star_fmp embedded in the same case table as epsilon_mp.
ExtendedReal epsilon_fmp(std::uint64_t m, std::uint64_t p, std::uint64_t q, std::uint64_t k_m, double lambda_i,
                         std::uint64_t neighbors, double delta_m, std::uint64_t agents, double eps,
                         FmpGrouping grouping = FmpGrouping::inside_root);

/// For every agent i:
///   ln((4Z-2)^(1/2Z) N_fmp / delta_m^(1/2Z))
///     < (1 + sum_{j != i} R_j,max / (R_i,max + R_G,max))^2 ln(2 N_mp / delta_m)
/// Throws std::invalid_argument when some R_i,max + R_G,max is zero.
bool prop2_holds(std::uint64_t agents, double delta_m, std::uint64_t n_fmp, std::uint64_t n_mp,
                 const std::vector<double>& agent_max, double global_max);

}  // namespace mces::palo
