#pragma once

#include <cstdint>
#include <vector>

#include "mces/extended_real.hpp"
#include "mces/palo/bounds.hpp"

namespace mces::palo {

/// Constants of one transform stage. The envelope's log term is computed
/// once here so the learners' per-sample comparisons are a square root.
struct Stage {
  std::uint64_t m = 1;
  double delta_m = 0.0;
  std::uint64_t k_m = 1;
  std::vector<double> log_terms;  // one per agent (a single entry for MP)
};

/// PALO stopping schedule of one learner. MP schedules have one component;
/// FMP schedules have one per agent and share the largest k_m.
class PaloSchedule {
 public:
  static PaloSchedule mp(double eps, double delta, double lambda, std::uint64_t neighbors);
  static PaloSchedule fmp(double eps, double delta, std::vector<double> lambdas, std::vector<std::uint64_t> neighbors,
                          FmpGrouping grouping = FmpGrouping::inside_root);

  bool is_fmp() const { return fmp_; }
  std::size_t components() const { return lambdas_.size(); }
  double epsilon() const { return eps_; }
  double delta() const { return delta_; }
  double lambda(std::size_t component = 0) const { return lambdas_.at(component); }
  std::uint64_t neighbors(std::size_t component = 0) const { return neighbors_.at(component); }
  FmpGrouping grouping() const { return grouping_; }

  double delta_m(std::uint64_t m) const { return palo::delta_m(delta_, m); }
  /// k_m of one component.
  std::uint64_t k_m(std::uint64_t m, std::size_t component) const;
  /// Shared sample requirement: the largest component k_m.
  std::uint64_t k_m(std::uint64_t m) const;

  Stage stage(std::uint64_t m) const;

  /// First-branch envelope at p samples (no k_m test); +inf for p = 0.
  ExtendedReal epsilon_star(const Stage& stage, std::uint64_t p, std::size_t component = 0) const {
    return envelope_from_log(lambdas_[component], p, stage.log_terms[component]);
  }

  /// Full case table with the stage's shared k_m.
  ExtendedReal envelope(const Stage& stage, std::uint64_t p, std::uint64_t q, std::size_t component = 0) const {
    if (p != q || p == 0 || p > stage.k_m) return ExtendedReal::infinity();
    if (p == stage.k_m) return ExtendedReal(eps_ / 2.0);
    return epsilon_star(stage, p, component);
  }

 private:
  PaloSchedule() = default;

  bool fmp_ = false;
  double eps_ = 0.0;
  double delta_ = 0.0;
  std::vector<double> lambdas_;
  std::vector<std::uint64_t> neighbors_;
  FmpGrouping grouping_ = FmpGrouping::inside_root;
};

}  // namespace mces::palo
