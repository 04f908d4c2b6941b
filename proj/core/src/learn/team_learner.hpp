#pragma once

// MCES-MP and MCES-FMP over the joint observation tree. The two share
// everything except the number of estimate components (one team value or
// one value per agent) and the acceptance rule.

#include <memory>
#include <optional>
#include <vector>

#include "mces/learn/learner.hpp"
#include "mces/learn/q_table.hpp"
#include "mces/palo/schedule.hpp"
#include "mces/trajectory.hpp"
#include "serialize.hpp"

namespace mces::learn::detail {

class TeamLearner final : public Learner {
 public:
  TeamLearner(Algorithm algorithm, const env::Environment& env, const JointPolicy& initial, LearnerOptions options);

  static std::unique_ptr<TeamLearner> restore(const env::Environment& env, const json& j, LearnerOptions options);

  bool step() override;
  bool finished() const override { return termination_.has_value(); }
  std::uint64_t samples() const override { return samples_; }
  LearnerResult result() const override;
  std::string checkpoint() const override;

 protected:
  void stop(Termination reason) override;
  const LearnerOptions& options() const override { return options_; }

 private:
  bool fmp() const { return algorithm_ == Algorithm::fmp; }
  void fold(const StartPair& pick);
  bool try_accept(NodeId node);
  void end_round();
  void rebuild_active();
  void emit(std::string_view kind) const;
  std::uint64_t effective_neighbors() const;

  Algorithm algorithm_;
  const env::Environment* env_;
  LearnerOptions options_;
  std::size_t horizon_;
  double discount_;
  std::vector<std::uint8_t> depth_;
  std::vector<double> shift_;
  std::vector<double> scale_;
  double regret_range_ = 1.0;
  palo::PaloSchedule schedule_;
  palo::Stage stage_;
  std::uint64_t neighbors_ = 0;

  std::vector<JointAction> policy_;
  std::uint64_t transforms_ = 0;
  std::uint64_t samples_ = 0;
  QTable table_;
  ExploringStarts starts_;
  RngStream explore_rng_;
  prune::PruneState prune_;
  std::vector<TransformRecord> history_;
  std::optional<Termination> termination_;

  Trajectory trajectory_;
  std::vector<NodeId> visited_;
  std::vector<double> returns_;
};

}  // namespace mces::learn::detail
