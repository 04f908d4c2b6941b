#include "mces/palo/schedule.hpp"

#include <algorithm>
#include <stdexcept>

namespace mces::palo {

PaloSchedule PaloSchedule::mp(double eps, double delta, double lambda, std::uint64_t neighbors) {
  PaloSchedule s;
  s.eps_ = eps;
  s.delta_ = delta;
  s.lambdas_ = {lambda};
  s.neighbors_ = {std::max<std::uint64_t>(neighbors, 1)};
  (void)s.k_m(1);  // validates the parameters
  return s;
}

PaloSchedule PaloSchedule::fmp(double eps, double delta, std::vector<double> lambdas,
                               std::vector<std::uint64_t> neighbors, FmpGrouping grouping) {
  if (lambdas.empty() || lambdas.size() != neighbors.size()) {
    throw std::invalid_argument("FMP schedule needs one lambda and one neighborhood size per agent");
  }
  PaloSchedule s;
  s.fmp_ = true;
  s.eps_ = eps;
  s.delta_ = delta;
  s.lambdas_ = std::move(lambdas);
  s.neighbors_ = std::move(neighbors);
  for (auto& n : s.neighbors_) n = std::max<std::uint64_t>(n, 1);
  s.grouping_ = grouping;
  (void)s.k_m(1);
  return s;
}

std::uint64_t PaloSchedule::k_m(std::uint64_t m, std::size_t component) const {
  const double dm = delta_m(m);
  if (fmp_) return k_m_fmp(lambdas_.at(component), eps_, neighbors_.at(component), dm, lambdas_.size());
  return k_m_mp(lambdas_.at(component), eps_, neighbors_.at(component), dm);
}

std::uint64_t PaloSchedule::k_m(std::uint64_t m) const {
  std::uint64_t k = 0;
  for (std::size_t c = 0; c < components(); ++c) k = std::max(k, k_m(m, c));
  return k;
}

Stage PaloSchedule::stage(std::uint64_t m) const {
  Stage st;
  st.m = m;
  st.delta_m = delta_m(m);
  st.k_m = k_m(m);
  for (std::size_t c = 0; c < components(); ++c) {
    st.log_terms.push_back(fmp_ ? log_term_fmp(st.k_m, neighbors_[c], st.delta_m, components(), grouping_)
                                : log_term_mp(st.k_m, neighbors_[c], st.delta_m));
  }
  return st;
}

}  // namespace mces::palo
