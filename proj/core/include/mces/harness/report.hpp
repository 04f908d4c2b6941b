#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "mces/harness/experiment.hpp"

namespace mces::harness {

/// seed,initial_value,final_value,samples,samples_per_transform,transforms,
/// k_m,neighbors,effective_neighbors,termination,pruned,value_method
std::string per_seed_csv(const RunReport& report);

/// One aggregate row (mean and standard error of each column) or just the
/// header for an empty report.
std::string summary_csv(const RunReport& report);

/// seed,node,sequence,regret,count,probability for every pruned sequence.
std::string pruned_csv(const RunReport& report);

/// Aggregate rows of several reports, keyed by phi.
std::string sweep_csv(const std::vector<RunReport>& reports);

/// Writes <path>, <stem>_summary.csv and <stem>_pruned.csv next to it.
void emit_report(const RunReport& report, const std::filesystem::path& path);
void emit_sweep(const std::vector<RunReport>& reports, const std::filesystem::path& path);

}  // namespace mces::harness
