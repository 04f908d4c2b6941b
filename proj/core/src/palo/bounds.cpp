#include "mces/palo/bounds.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <fmt/format.h>

namespace mces::palo {

namespace {

void require_positive(double x, const char* what) {
  if (!(x > 0.0) || !std::isfinite(x)) throw std::invalid_argument(fmt::format("{} must be positive and finite, got {}", what, x));
}

void require_budget(double delta_m) {
  if (!(delta_m > 0.0 && delta_m < 1.0)) throw std::invalid_argument(fmt::format("delta_m must lie in (0, 1), got {}", delta_m));
}

std::uint64_t ceil_count(double x) {
  if (!std::isfinite(x) || x >= 9.2e18) throw std::overflow_error(fmt::format("sample requirement {} does not fit", x));
  const double c = std::ceil(x);
  return c < 1.0 ? 1 : static_cast<std::uint64_t>(c);
}

double fmp_log(double k_factor_log, std::uint64_t neighbors, double delta_m, std::uint64_t agents) {
  const double z2 = 2.0 * static_cast<double>(agents);
  return (std::log(4.0 * static_cast<double>(agents) - 2.0) + k_factor_log - std::log(delta_m)) / z2 +
         std::log(static_cast<double>(neighbors));
}

}  // namespace

double delta_m(double delta, std::uint64_t m) {
  if (m < 1) throw std::invalid_argument("transform index m must be at least 1");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument(fmt::format("delta must lie in (0, 1), got {}", delta));
  const double md = static_cast<double>(m);
  return 6.0 * delta / (9.872 * md * md);
}

double lambda_bound(double r_max, double r_min, std::uint64_t horizon) {
  if (r_max < r_min) throw std::invalid_argument("r_max must not be below r_min");
  return 2.0 * static_cast<double>(horizon) * (r_max - r_min);
}

std::uint64_t k_m_mp(double lambda, double eps, std::uint64_t neighbors, double delta_m) {
  require_positive(lambda, "lambda");
  require_positive(eps, "epsilon");
  require_budget(delta_m);
  if (neighbors < 1) throw std::invalid_argument("neighborhood size must be at least 1");
  const double ratio = lambda / eps;
  return ceil_count(2.0 * ratio * ratio * std::log(2.0 * static_cast<double>(neighbors) / delta_m));
}

std::uint64_t k_m_fmp(double lambda_i, double eps, std::uint64_t neighbors, double delta_m, std::uint64_t agents) {
  require_positive(lambda_i, "lambda");
  require_positive(eps, "epsilon");
  require_budget(delta_m);
  if (neighbors < 1) throw std::invalid_argument("neighborhood size must be at least 1");
  if (agents < 1) throw std::invalid_argument("agent count must be at least 1");
  const double ratio = lambda_i / eps;
  return ceil_count(2.0 * ratio * ratio * fmp_log(0.0, neighbors, delta_m, agents));
}

double log_term_mp(std::uint64_t k_m, std::uint64_t neighbors, double delta_m) {
  if (k_m < 2) return std::numeric_limits<double>::infinity();
  return std::log(2.0 * static_cast<double>(k_m - 1) * static_cast<double>(neighbors) / delta_m);
}

double log_term_fmp(std::uint64_t k_m, std::uint64_t neighbors, double delta_m, std::uint64_t agents,
                    FmpGrouping grouping) {
  if (k_m < 2) return std::numeric_limits<double>::infinity();
  const double lk = std::log(static_cast<double>(k_m - 1));
  if (grouping == FmpGrouping::inside_root) return fmp_log(lk, neighbors, delta_m, agents);
  return fmp_log(0.0, neighbors, delta_m, agents) + lk;
}

ExtendedReal envelope_from_log(double lambda, std::uint64_t p, double log_term) {
  if (p == 0 || !std::isfinite(log_term)) return ExtendedReal::infinity();
  return ExtendedReal(lambda * std::sqrt(log_term / (2.0 * static_cast<double>(p))));
}

ExtendedReal epsilon_mp(std::uint64_t /*m*/, std::uint64_t p, std::uint64_t q, std::uint64_t k_m, double lambda,
                        std::uint64_t neighbors, double delta_m, double eps) {
  if (p != q || p == 0 || p > k_m) return ExtendedReal::infinity();
  if (p == k_m) return ExtendedReal(eps / 2.0);
  return envelope_from_log(lambda, p, log_term_mp(k_m, neighbors, delta_m));
}

ExtendedReal epsilon_star_fmp(std::uint64_t /*m*/, std::uint64_t p, std::uint64_t k_m, double lambda_i,
                              std::uint64_t neighbors, double delta_m, std::uint64_t agents, FmpGrouping grouping) {
  return envelope_from_log(lambda_i, p, log_term_fmp(k_m, neighbors, delta_m, agents, grouping));
}

ExtendedReal epsilon_fmp(std::uint64_t m, std::uint64_t p, std::uint64_t q, std::uint64_t k_m, double lambda_i,
                         std::uint64_t neighbors, double delta_m, std::uint64_t agents, double eps,
                         FmpGrouping grouping) {
  if (p != q || p == 0 || p > k_m) return ExtendedReal::infinity();
  if (p == k_m) return ExtendedReal(eps / 2.0);
  return epsilon_star_fmp(m, p, k_m, lambda_i, neighbors, delta_m, agents, grouping);
}

bool prop2_holds(std::uint64_t agents, double delta_m, std::uint64_t n_fmp, std::uint64_t n_mp,
                 const std::vector<double>& agent_max, double global_max) {
  if (agent_max.size() != agents) throw std::invalid_argument("need one reward maximum per agent");
  require_budget(delta_m);
  double total = 0.0;
  for (const double r : agent_max) total += r;
  const double lhs = fmp_log(0.0, n_fmp, delta_m, agents);
  const double log_mp = std::log(2.0 * static_cast<double>(n_mp) / delta_m);
  for (std::size_t i = 0; i < agents; ++i) {
    const double denom = agent_max[i] + global_max;
    if (denom == 0.0) throw std::invalid_argument("R_i,max + R_G,max is zero");
    const double factor = 1.0 + (total - agent_max[i]) / denom;
    if (!(lhs < factor * factor * log_mp)) return false;
  }
  return true;
}

}  // namespace mces::palo
