#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mces/env/environment.hpp"
#include "mces/extended_real.hpp"
#include "mces/learn/exploring_start.hpp"
#include "mces/neighborhood.hpp"
#include "mces/palo/bounds.hpp"
#include "mces/palo/schedule.hpp"
#include "mces/policy.hpp"
#include "mces/prune/prune_state.hpp"

namespace mces::learn {

enum class Algorithm { mp, fmp, mcesp };
enum class Termination { converged_full_sweep, converged_early_dominance, budget_exhausted };

std::string_view to_string(Algorithm algorithm);
std::string_view to_string(Termination termination);
Algorithm parse_algorithm(std::string_view text);
Termination parse_termination(std::string_view text);

struct ProgressEvent {
  std::string_view kind;  // "progress", "transform" or "done"
  std::uint64_t samples = 0;
  std::uint64_t transforms = 0;
  std::uint64_t k_m = 0;
  double value_estimate = 0.0;  // Q of the current action at the root, learner units
};

struct LearnerOptions {
  double eps = 0.1;
  double delta = 0.1;
  Strategy strategy = Strategy::iterated;
  std::uint64_t budget = 100'000'000;  // trajectories
  std::uint64_t seed = 0;
  /// Rewards enter the estimates as (r - r_min) / (r_max - r_min), so eps
  /// and the value range are in units of one step's reward range.
  bool normalize = true;
  /// Regret budget. Unset disables pruning entirely; 0 runs the pruning
  /// bookkeeping but can never prune.
  std::optional<ExtendedReal> phi;
  bool prune_persist = false;
  bool early_dominance = true;
  palo::FmpGrouping grouping = palo::FmpGrouping::inside_root;
  NeighborhoodConvention convention = NeighborhoodConvention::verbatim;
  std::optional<double> wall_clock_seconds;
  std::function<void(const ProgressEvent&)> progress;
  std::uint64_t progress_interval = 1'000'000;
};

struct TransformRecord {
  std::uint64_t stage = 0;        // m at acceptance
  std::size_t agent = 0;          // MCES-P only; 0 otherwise
  NodeId node;
  JointAction from;
  JointAction to;
  std::uint64_t samples = 0;      // total trajectories when accepted
  std::uint64_t count = 0;        // p = q of the compared entries
  std::vector<double> q_from;     // per component
  std::vector<double> q_to;
  std::vector<double> envelope;   // per component
};

struct LearnerResult {
  Algorithm algorithm = Algorithm::mp;
  JointPolicy policy;
  std::uint64_t transforms = 0;
  std::uint64_t samples = 0;
  Termination termination = Termination::budget_exhausted;
  std::uint64_t k_m = 0;
  std::uint64_t neighbors = 0;
  std::uint64_t effective_neighbors = 0;
  std::vector<TransformRecord> history;
  std::vector<prune::PrunedEntry> pruned;
};

/// Incremental learner: one exploring-start trajectory per step().
class Learner {
 public:
  virtual ~Learner() = default;

  /// Draws and folds one trajectory. Returns false once terminated.
  virtual bool step() = 0;
  virtual bool finished() const = 0;
  virtual std::uint64_t samples() const = 0;
  virtual LearnerResult result() const = 0;
  /// Full learner state as a versioned JSON document.
  virtual std::string checkpoint() const = 0;

  /// Steps until termination, honouring the budget and the wall-clock cap.
  /// `hook` (if set) sees the learner between steps every `hook_every`
  /// trajectories and once more at the end; used for periodic checkpoints.
  LearnerResult run(const std::function<void(const Learner&)>& hook = {}, std::uint64_t hook_every = 0);

 protected:
  virtual void stop(Termination reason) = 0;
  virtual const LearnerOptions& options() const = 0;
};

/// The stopping schedule a learner built with these options uses. For mcesp
/// it is agent `agent`'s schedule over its own observation histories.
palo::PaloSchedule learner_schedule(Algorithm algorithm, const DomainSpec& spec, const LearnerOptions& options,
                                    std::size_t agent = 0);

std::unique_ptr<Learner> make_learner(Algorithm algorithm, const env::Environment& env, const JointPolicy& initial,
                                      LearnerOptions options);

/// Continues a learner from checkpoint(); options other than the progress
/// callback, interval and wall-clock cap come from the checkpoint.
std::unique_ptr<Learner> restore_learner(const env::Environment& env, std::string_view checkpoint,
                                         LearnerOptions runtime = {});

/// Convenience wrappers: construct and run to termination.
LearnerResult mces_mp_run(const env::Environment& env, const JointPolicy& initial, LearnerOptions options);
LearnerResult mces_fmp_run(const env::Environment& env, const JointPolicy& initial, LearnerOptions options);
LearnerResult mces_p_baseline_run(const env::Environment& env, const JointPolicy& initial, LearnerOptions options);

}  // namespace mces::learn
