#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "mces/palo/bounds.hpp"
#include "mces/palo/schedule.hpp"
#include "oracle/bounds_oracle.hpp"

using namespace mces;
using namespace mces::palo;
using oracle::Real;

namespace {

const double kDelta1 = 0.060777957860615883;

double rel(double got, const Real& want) {
  const double w = want.convert_to<double>();
  return std::abs(got - w) / std::max(1.0, std::abs(w));
}

}  // namespace

TEST(Bounds, WorkedExample) {
  EXPECT_DOUBLE_EQ(delta_m(0.1, 1), kDelta1);
  EXPECT_LT(rel(delta_m(0.1, 1), oracle::delta_m(Real("0.1"), 1)), 1e-15);
  EXPECT_DOUBLE_EQ(lambda_bound(1.0, 0.0, 3), 6.0);
  EXPECT_EQ(k_m_mp(6.0, 0.1, 36, kDelta1), 50956u);
  EXPECT_EQ(k_m_fmp(6.0, 0.1, 12, kDelta1, 2), 26158u);
  const Real dm = oracle::delta_m(Real("0.1"), 1);
  EXPECT_EQ(static_cast<std::uint64_t>(ceil(oracle::k_mp_real(6, Real("0.1"), 36, dm))), 50956u);
  EXPECT_EQ(static_cast<std::uint64_t>(ceil(oracle::k_fmp_real(6, Real("0.1"), 12, dm, 2))), 26158u);

  const ExtendedReal e = epsilon_mp(1, 100, 100, 50956, 6.0, 36, kDelta1, 0.1);
  EXPECT_NEAR(e.value(), 1.7957896948856280, 1e-14);
  EXPECT_LT(rel(e.value(), oracle::eps_mp(100, 100, 50956, 6, 36, dm, Real("0.1"))), 1e-12);
  const ExtendedReal f = epsilon_star_fmp(1, 100, 26159, 6.0, 12, kDelta1, 2);
  EXPECT_NEAR(f.value(), 1.0543586215899778, 1e-14);
  EXPECT_LT(rel(f.value(), oracle::eps_star_fmp(100, 26159, 6, 12, dm, 2)), 1e-12);
}

TEST(Bounds, CaseTable) {
  const double eps = 0.1;
  const std::uint64_t k = 500;
  EXPECT_TRUE(epsilon_mp(1, 10, 11, k, 6.0, 36, kDelta1, eps).is_infinite());
  EXPECT_TRUE(epsilon_mp(1, 0, 0, k, 6.0, 36, kDelta1, eps).is_infinite());
  EXPECT_TRUE(epsilon_mp(1, k + 1, k + 1, k, 6.0, 36, kDelta1, eps).is_infinite());
  EXPECT_EQ(epsilon_mp(1, k, k, k, 6.0, 36, kDelta1, eps).value(), eps / 2);
  EXPECT_TRUE(epsilon_mp(1, k - 1, k - 1, k, 6.0, 36, kDelta1, eps).is_finite());
  EXPECT_EQ(epsilon_fmp(1, k, k, k, 6.0, 12, kDelta1, 2, eps).value(), eps / 2);
  EXPECT_TRUE(epsilon_fmp(1, 3, 4, k, 6.0, 12, kDelta1, 2, eps).is_infinite());
  EXPECT_TRUE(epsilon_star_fmp(1, 0, k, 6.0, 12, kDelta1, 2).is_infinite());
  EXPECT_TRUE(envelope_from_log(6.0, 0, 1.0).is_infinite());
}

TEST(Bounds, RejectsBadArguments) {
  EXPECT_THROW(delta_m(0.1, 0), std::invalid_argument);
  EXPECT_THROW(delta_m(0.0, 1), std::invalid_argument);
  EXPECT_THROW(delta_m(1.0, 1), std::invalid_argument);
  EXPECT_THROW(lambda_bound(0.0, 1.0, 2), std::invalid_argument);
  EXPECT_THROW(k_m_mp(6.0, 0.0, 36, kDelta1), std::invalid_argument);
  EXPECT_THROW(k_m_mp(6.0, 0.1, 0, kDelta1), std::invalid_argument);
  EXPECT_THROW(k_m_fmp(6.0, 0.1, 12, kDelta1, 0), std::invalid_argument);
  EXPECT_THROW(k_m_mp(1e9, 1e-9, 36, kDelta1), std::overflow_error);
}

TEST(Bounds, AgreeWithExtendedPrecision) {
  std::mt19937_64 gen(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const double lam = 0.5 + 50.0 * u(gen), eps = 0.01 + u(gen), delta = 0.001 + 0.998 * u(gen);
    const std::uint64_t m = 1 + gen() % 200, n = 1 + gen() % 100000, z = 2 + gen() % 6;
    const double dm = delta_m(delta, m);
    const Real dmr = oracle::delta_m(Real(delta), m);
    EXPECT_LT(rel(dm, dmr) , 1e-13);
    const Real kmp = oracle::k_mp_real(Real(lam), Real(eps), n, Real(dm));
    const Real kfmp = oracle::k_fmp_real(Real(lam), Real(eps), n, Real(dm), z);
    const std::uint64_t a = k_m_mp(lam, eps, n, dm), b = k_m_fmp(lam, eps, n, dm, z);
    // a ceiling may only differ when the exact value is within rounding of an integer
    if (abs(kmp - round(kmp)) > Real("1e-6")) EXPECT_EQ(a, ceil(kmp).convert_to<std::uint64_t>());
    if (abs(kfmp - round(kfmp)) > Real("1e-6")) EXPECT_EQ(b, ceil(kfmp).convert_to<std::uint64_t>());
    const std::uint64_t p = 1 + gen() % std::max<std::uint64_t>(1, a - 1);
    const ExtendedReal e = epsilon_mp(m, p, p, a, lam, n, dm, eps);
    EXPECT_LT(rel(e.value(), oracle::eps_mp(p, p, a, Real(lam), n, Real(dm), Real(eps))), 1e-12);
    const std::uint64_t k = 2 + gen() % 100000;
    for (const bool outside : {false, true}) {
      const auto grouping = outside ? FmpGrouping::outside_root : FmpGrouping::inside_root;
      const ExtendedReal s = epsilon_star_fmp(m, p, k, lam, n, dm, z, grouping);
      EXPECT_LT(rel(s.value(), oracle::eps_star_fmp(p, k, Real(lam), n, Real(dm), z, outside)), 1e-12);
    }
  }
}

TEST(Bounds, Monotone) {
  const double dm = kDelta1;
  EXPECT_LT(k_m_mp(6.0, 0.1, 36, delta_m(0.1, 1)), k_m_mp(6.0, 0.1, 36, delta_m(0.1, 2)));
  EXPECT_LT(k_m_mp(6.0, 0.1, 36, dm), k_m_mp(6.0, 0.1, 37, dm));
  EXPECT_LT(k_m_mp(6.0, 0.1, 36, dm), k_m_mp(6.5, 0.1, 36, dm));
  EXPECT_GT(k_m_mp(6.0, 0.1, 36, dm), k_m_mp(6.0, 0.2, 36, dm));
  EXPECT_LT(k_m_fmp(6.0, 0.1, 12, dm, 2), k_m_fmp(6.0, 0.1, 13, dm, 2));
  double previous = std::numeric_limits<double>::infinity();
  for (std::uint64_t p = 1; p < 1000; ++p) {
    const double e = epsilon_mp(1, p, p, 50956, 6.0, 36, dm, 0.1).value();
    EXPECT_LT(e, previous);
    previous = e;
  }
}

TEST(Bounds, SingleAgentFmpIsMpWithSquaredNeighborhood) {
  for (std::uint64_t n : {1u, 5u, 400u}) {
    for (std::uint64_t k : {2u, 10u, 12345u}) {
      EXPECT_NEAR(log_term_fmp(k, n, kDelta1, 1), 0.5 * log_term_mp(k, n * n, kDelta1), 1e-12);
    }
    const Real real = oracle::k_fmp_real(6, Real("0.1"), n, Real(kDelta1), 1);
    EXPECT_NEAR(real.convert_to<double>(), 0.5 * oracle::k_mp_real(6, Real("0.1"), n * n, Real(kDelta1)).convert_to<double>(), 1e-6);
  }
}

TEST(Bounds, GroupingDiffersOnlyInTheKFactor) {
  const double inside = log_term_fmp(100, 12, kDelta1, 2, FmpGrouping::inside_root);
  const double outside = log_term_fmp(100, 12, kDelta1, 2, FmpGrouping::outside_root);
  EXPECT_NEAR(outside - inside, std::log(99.0) * (1.0 - 1.0 / 4.0), 1e-12);
}

TEST(Bounds, FactoredDominanceExample) {
  // unit-width local rewards and a global width of 10
  const std::vector<double> agent_max{1.0, 1.0};
  EXPECT_TRUE(prop2_holds(2, kDelta1, 12, 36, agent_max, 10.0));
  EXPECT_TRUE(oracle::prop2(2, Real(kDelta1), 12, 36, {Real(1), Real(1)}, Real(10)));
  const Real root = Real(1) / 4;
  const Real lhs = log(pow(Real(6), root) * Real(12) / pow(Real(kDelta1), root));
  const Real rhs = Real(12) * Real(12) / (Real(11) * Real(11)) * log(Real(72) / Real(kDelta1));
  EXPECT_NEAR(lhs.convert_to<double>(), 3.6329785398272697, 1e-14);
  EXPECT_NEAR(rhs.convert_to<double>(), 8.4224460019181093, 1e-14);
  EXPECT_FALSE(prop2_holds(2, kDelta1, 1'000'000'000'000ULL, 36, agent_max, 10.0));
  EXPECT_FALSE(oracle::prop2(2, Real(kDelta1), 1'000'000'000'000ULL, 36, {Real(1), Real(1)}, Real(10)));
  EXPECT_THROW(prop2_holds(2, kDelta1, 12, 36, {0.0, 1.0}, 0.0), std::invalid_argument);
  EXPECT_THROW(prop2_holds(2, kDelta1, 12, 36, {1.0}, 1.0), std::invalid_argument);
}

TEST(Bounds, ConfidenceSeriesStaysBelowDelta) {
  double sum = 0.0;
  for (std::uint64_t m = 1; m <= 1'000'000; ++m) sum += delta_m(0.1, m);
  const double limit = 0.1 * M_PI * M_PI / 9.872;
  EXPECT_LT(sum, 0.1);
  EXPECT_LT(sum, limit);
  EXPECT_NEAR(sum, limit, 1e-6);
}

TEST(Schedule, MpStages) {
  const PaloSchedule s = PaloSchedule::mp(0.1, 0.1, 6.0, 36);
  EXPECT_FALSE(s.is_fmp());
  EXPECT_EQ(s.components(), 1u);
  const Stage st = s.stage(1);
  EXPECT_EQ(st.k_m, 50956u);
  EXPECT_DOUBLE_EQ(st.delta_m, kDelta1);
  ASSERT_EQ(st.log_terms.size(), 1u);
  EXPECT_DOUBLE_EQ(st.log_terms[0], log_term_mp(50956, 36, kDelta1));
  for (std::uint64_t p : {0u, 1u, 100u, 50955u, 50956u, 50957u}) {
    for (std::uint64_t q : {p, p + 1}) {
      EXPECT_EQ(s.envelope(st, p, q), epsilon_mp(1, p, q, st.k_m, 6.0, 36, kDelta1, 0.1));
    }
  }
  EXPECT_GT(s.stage(5).k_m, st.k_m);
  EXPECT_EQ(s.stage(5).m, 5u);
}

TEST(Schedule, FmpSharesTheLargestRequirement) {
  const PaloSchedule s = PaloSchedule::fmp(0.1, 0.1, {6.0, 8.0}, {12, 12});
  EXPECT_TRUE(s.is_fmp());
  const Stage st = s.stage(2);
  const double dm = delta_m(0.1, 2);
  EXPECT_EQ(s.k_m(2, 0), k_m_fmp(6.0, 0.1, 12, dm, 2));
  EXPECT_EQ(s.k_m(2, 1), k_m_fmp(8.0, 0.1, 12, dm, 2));
  EXPECT_EQ(st.k_m, s.k_m(2, 1));
  EXPECT_EQ(s.k_m(2), st.k_m);
  for (std::size_t c = 0; c < 2; ++c) {
    EXPECT_DOUBLE_EQ(st.log_terms[c], log_term_fmp(st.k_m, 12, dm, 2));
    EXPECT_EQ(s.envelope(st, 50, 50, c), epsilon_fmp(2, 50, 50, st.k_m, s.lambda(c), 12, dm, 2, 0.1));
  }
}
