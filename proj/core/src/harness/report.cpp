#include "mces/harness/report.hpp"

#include <fstream>
#include <stdexcept>

#include <fmt/format.h>

#include "mces/policy_io.hpp"
#include "mces/sequence_tree.hpp"

namespace mces::harness {

namespace {

constexpr const char* kSummaryHeader =
    "algorithm,environment,horizon,phi,seeds,initial_value_mean,initial_value_se,final_value_mean,final_value_se,"
    "samples_mean,samples_se,samples_per_transform_mean,samples_per_transform_se,transforms_mean,transforms_se,"
    "k_m_mean,k_m_se\n";

std::string phi_column(const ExperimentConfig& config) {
  if (!config.pruning) return "off";
  return config.phi.is_infinite() ? "inf" : fmt::format("{}", config.phi.value());
}

std::string summary_row(const RunReport& report) {
  std::vector<double> init, fin, samples, per, transforms, km;
  for (const RunRow& r : report.rows) {
    init.push_back(r.initial_value);
    fin.push_back(r.final_value);
    samples.push_back(static_cast<double>(r.samples));
    per.push_back(r.samples_per_transform);
    transforms.push_back(static_cast<double>(r.transforms));
    km.push_back(static_cast<double>(r.k_m));
  }
  std::string out = fmt::format("{},{},{},{},{}", learn::to_string(report.config.algorithm), report.config.environment,
                                report.config.horizon, phi_column(report.config), report.rows.size());
  for (const auto* column : {&init, &fin, &samples, &per, &transforms, &km}) {
    const Aggregate a = aggregate(*column);
    out += fmt::format(",{},{}", a.mean, a.std_error);
  }
  return out + "\n";
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

std::filesystem::path sibling(const std::filesystem::path& path, const std::string& suffix) {
  return path.parent_path() / (path.stem().string() + suffix);
}

}  // namespace

std::string per_seed_csv(const RunReport& report) {
  std::string out =
      "seed,initial_value,final_value,samples,samples_per_transform,transforms,k_m,neighbors,effective_neighbors,"
      "termination,pruned,value_method\n";
  for (const RunRow& r : report.rows) {
    out += fmt::format("{},{},{},{},{},{},{},{},{},{},{},{}\n", r.seed, r.initial_value, r.final_value, r.samples,
                       r.samples_per_transform, r.transforms, r.k_m, r.neighbors, r.effective_neighbors,
                       learn::to_string(r.termination), r.pruned.size(), r.value_method);
  }
  return out;
}

std::string summary_csv(const RunReport& report) {
  std::string out = kSummaryHeader;
  if (!report.rows.empty()) out += summary_row(report);
  return out;
}

std::string pruned_csv(const RunReport& report) {
  std::string out = "seed,node,sequence,regret,count,probability\n";
  if (report.rows.empty()) return out;
  std::optional<env::Environment> env;
  for (const RunRow& r : report.rows) {
    if (r.pruned.empty()) continue;
    if (!env) env = experiment_environment(report.config);
    const SequenceTree tree(env->spec());
    for (const auto& e : r.pruned) {
      out += fmt::format("{},{},\"{}\",{},{},{}\n", r.seed, e.node.index,
                         format_sequence(env->spec(), tree.sequence_of(e.node)), e.regret, e.count, e.probability);
    }
  }
  return out;
}

std::string sweep_csv(const std::vector<RunReport>& reports) {
  std::string out = kSummaryHeader;
  for (const RunReport& r : reports) {
    if (!r.rows.empty()) out += summary_row(r);
  }
  return out;
}

void emit_report(const RunReport& report, const std::filesystem::path& path) {
  write_file(path, per_seed_csv(report));
  write_file(sibling(path, "_summary.csv"), summary_csv(report));
  write_file(sibling(path, "_pruned.csv"), pruned_csv(report));
}

void emit_sweep(const std::vector<RunReport>& reports, const std::filesystem::path& path) {
  write_file(path, sweep_csv(reports));
}

}  // namespace mces::harness
