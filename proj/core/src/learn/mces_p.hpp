#pragma once

// Independent single-agent MCES-P learners executed jointly. Each agent
// keeps a policy over its own observation history and learns from its own
// reward R_i + R_G.

#include <memory>
#include <optional>
#include <vector>

#include "mces/learn/learner.hpp"
#include "mces/learn/q_table.hpp"
#include "mces/palo/schedule.hpp"
#include "mces/sequence_tree.hpp"
#include "mces/trajectory.hpp"
#include "serialize.hpp"

namespace mces::learn::detail {

/// Per-agent policies over each agent's own observation sequences.
struct LocalPolicyProfile {
  std::vector<SequenceTree> trees;
  std::vector<std::vector<std::uint32_t>> policies;

  /// The joint policy that executes every agent's local policy.
  JointPolicy to_joint(const DomainSpec& spec) const;
};

class McesPLearner final : public Learner {
 public:
  McesPLearner(const env::Environment& env, const JointPolicy& initial, LearnerOptions options);

  static std::unique_ptr<McesPLearner> restore(const env::Environment& env, const json& j, LearnerOptions options);

  bool step() override;
  bool finished() const override { return termination_.has_value(); }
  std::uint64_t samples() const override { return samples_; }
  LearnerResult result() const override;
  std::string checkpoint() const override;

 protected:
  void stop(Termination reason) override;
  const LearnerOptions& options() const override { return options_; }

 private:
  struct Agent {
    std::vector<std::uint8_t> depth{};
    QTable table{};
    ExploringStarts starts{};
    RngStream explore{0, 0};
    palo::PaloSchedule schedule;
    palo::Stage stage{};
    std::uint64_t transforms = 0;
    double shift = 0.0;
    double scale = 1.0;
    std::optional<Termination> done{};
    std::optional<StartPair> pick{};
  };

  void rollout();
  void end_round(std::size_t i);
  bool try_accept(std::size_t i, NodeId node);
  void finish_if_done();
  void emit(std::string_view kind) const;

  const env::Environment* env_;
  LearnerOptions options_;
  LocalPolicyProfile profile_;
  std::vector<Agent> agents_;
  std::uint64_t samples_ = 0;
  std::vector<TransformRecord> history_;
  std::optional<Termination> termination_;

  Trajectory trajectory_;
  std::vector<std::vector<NodeId>> visited_;  // per agent, own nodes by step
};

}  // namespace mces::learn::detail
