#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mces/env/environment.hpp"
#include "mces/extended_real.hpp"
#include "mces/learn/learner.hpp"
#include "mces/policy.hpp"

namespace mces::harness {

struct ExperimentConfig {
  std::string environment = "tiger";
  learn::Algorithm algorithm = learn::Algorithm::fmp;
  double eps = 0.1;
  double delta = 0.1;
  ExtendedReal phi{0.0};
  bool pruning = true;  // false runs the learners without any pruning bookkeeping
  /// When non-empty the command-line tool runs one experiment per value.
  std::vector<ExtendedReal> phi_sweep;
  std::optional<double> discount;  // the environment file's value when unset
  std::size_t horizon = 2;
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
  std::uint64_t budget = 100'000'000;
  /// Optional per-seed budgets (same order as seeds); used for matched-budget comparisons.
  std::vector<std::uint64_t> seed_budgets;
  learn::Strategy strategy = learn::Strategy::iterated;
  std::filesystem::path output;
  double wall_clock_seconds = 1200.0;
  unsigned workers = 1;
  bool normalize = true;
  bool early_dominance = true;
  bool prune_persist = false;
  std::optional<std::filesystem::path> data_dir;
  std::optional<std::filesystem::path> progress_path;  // JSONL progress events
  /// Learner checkpoints, one file per seed. A run whose file already exists
  /// continues from it instead of starting over.
  std::optional<std::filesystem::path> checkpoint_dir;
  std::uint64_t checkpoint_every = 1'000'000;  // trajectories

  /// Throws std::invalid_argument describing the first problem.
  void validate() const;
};

struct RunRow {
  std::uint64_t seed = 0;
  double initial_value = 0.0;
  double final_value = 0.0;
  std::uint64_t samples = 0;
  double samples_per_transform = 0.0;  // samples / max(1, transforms)
  std::uint64_t transforms = 0;
  std::uint64_t k_m = 0;
  std::uint64_t neighbors = 0;
  std::uint64_t effective_neighbors = 0;
  learn::Termination termination = learn::Termination::budget_exhausted;
  std::vector<prune::PrunedEntry> pruned;
  std::string value_method;  // "exact" or "monte-carlo"
  JointPolicy final_policy;
};

struct RunReport {
  ExperimentConfig config;
  std::vector<RunRow> rows;
};

struct Aggregate {
  double mean = 0.0;
  double std_error = 0.0;
};

/// Mean and standard error (sample standard deviation / sqrt(n)).
Aggregate aggregate(const std::vector<double>& values);

struct PolicyEvaluation {
  double value = 0.0;
  std::string method;
};

/// Exact team value, or a 10^5-sample Monte Carlo estimate when the oracle
/// refuses the environment.
PolicyEvaluation evaluate_policy(const env::Environment& env, const JointPolicy& policy, std::uint64_t seed);

/// The environment an experiment runs on (horizon and discount applied).
env::Environment experiment_environment(const ExperimentConfig& config);

learn::LearnerOptions learner_options(const ExperimentConfig& config, std::uint64_t seed, std::uint64_t budget);

/// Uniformly random joint action per sequence node, from the seed's
/// initial-policy stream.
JointPolicy initial_policy(const DomainSpec& spec, std::uint64_t seed);

RunReport run_experiment(const ExperimentConfig& config);

/// One report per phi value, otherwise identical configs.
std::vector<RunReport> run_sweep(const ExperimentConfig& config, const std::vector<ExtendedReal>& phis);

/// Applies a key = value experiment file on top of `base`; its values win
/// over anything set before.
ExperimentConfig apply_config_file(ExperimentConfig base, const std::filesystem::path& path);

std::filesystem::path checkpoint_path(const std::filesystem::path& dir, std::uint64_t seed);

/// $MCES_OUTPUT_DIR when set, else "results".
std::filesystem::path default_output_dir();

}  // namespace mces::harness
