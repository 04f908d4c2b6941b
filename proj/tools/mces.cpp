#include <cstdint>
#include <exception>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "mces/env/domains.hpp"
#include "mces/env/oracle.hpp"
#include "mces/harness/experiment.hpp"
#include "mces/harness/report.hpp"
#include "mces/harness/verify.hpp"
#include "mces/learn/learner.hpp"
#include "mces/palo/schedule.hpp"
#include "mces/policy_io.hpp"

namespace {

using namespace mces;

constexpr int kNotOptimal = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

ExtendedReal parse_phi(const std::string& text) {
  if (text == "inf") return ExtendedReal::infinity();
  std::size_t used = 0;
  const double x = std::stod(text, &used);
  if (used != text.size()) throw std::invalid_argument("bad phi value '" + text + "'");
  return ExtendedReal(x);
}

std::string phi_label(const ExtendedReal& phi) { return phi.is_infinite() ? "inf" : fmt::format("{}", phi.value()); }

// The policy file names its horizon; the environment is built to match.
std::size_t policy_horizon(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("horizon ", 0) == 0) return std::stoul(line.substr(8));
  }
  throw std::invalid_argument("policy file has no horizon line");
}

struct EnvFlags {
  std::string name = "tiger";
  std::optional<double> discount;
  std::optional<std::string> data_dir;

  void add(CLI::App* app) {
    app->add_option("--env", name, "Environment: tiger, fire, align2 or align4")->capture_default_str();
    app->add_option("--discount", discount, "Override the environment file's discount");
    app->add_option("--data-dir", data_dir, "Directory of environment config files");
  }

  env::Environment build(std::size_t horizon) const {
    env::Environment e = env::make_environment(name, horizon, data_dir ? std::optional<std::filesystem::path>(*data_dir)
                                                                       : std::nullopt);
    return discount ? e.with_discount(*discount) : e;
  }
};

void print_report(const harness::RunReport& report) {
  for (const auto& r : report.rows) {
    fmt::print("seed {:>4}  init {:>12.4f}  final {:>12.4f}  samples {:>12}  transforms {:>5}  k_m {:>9}  {}\n", r.seed,
               r.initial_value, r.final_value, r.samples, r.transforms, r.k_m, learn::to_string(r.termination));
  }
  std::vector<double> init, fin;
  for (const auto& r : report.rows) {
    init.push_back(r.initial_value);
    fin.push_back(r.final_value);
  }
  const auto a = harness::aggregate(init);
  const auto b = harness::aggregate(fin);
  fmt::print("phi {}: initial {:.4f} +- {:.4f}, final {:.4f} +- {:.4f}\n", phi_label(report.config.phi), a.mean,
             a.std_error, b.mean, b.std_error);
}

void write_policies(const harness::RunReport& report, const std::filesystem::path& csv) {
  const env::Environment env = harness::experiment_environment(report.config);
  for (const auto& r : report.rows) {
    const auto path = csv.parent_path() / fmt::format("{}_seed{}.policy", csv.stem().string(), r.seed);
    write_file(path, write_policy(env.spec(), r.final_policy, learn::to_string(report.config.algorithm)));
  }
}

int run_command(harness::ExperimentConfig config, const std::vector<std::string>& phis,
                const std::optional<std::string>& config_file) {
  if (!phis.empty()) {
    config.phi_sweep.clear();
    for (const auto& p : phis) config.phi_sweep.push_back(parse_phi(p));
    if (config.phi_sweep.size() == 1) {
      config.phi = config.phi_sweep.front();
      config.phi_sweep.clear();
    }
  }
  if (config_file) config = harness::apply_config_file(config, *config_file);
  if (config.output.empty()) {
    config.output = harness::default_output_dir() /
                    fmt::format("{}_{}_T{}.csv", config.environment, learn::to_string(config.algorithm), config.horizon);
  }

  if (config.phi_sweep.empty()) {
    const harness::RunReport report = harness::run_experiment(config);
    harness::emit_report(report, config.output);
    write_policies(report, config.output);
    print_report(report);
    fmt::print("wrote {}\n", config.output.string());
    return 0;
  }
  std::vector<harness::RunReport> reports;
  for (const ExtendedReal& phi : config.phi_sweep) {
    harness::ExperimentConfig c = config;
    c.phi = phi;
    c.phi_sweep.clear();
    c.output = config.output.parent_path() / fmt::format("{}_phi{}.csv", config.output.stem().string(), phi_label(phi));
    if (c.checkpoint_dir) *c.checkpoint_dir /= fmt::format("phi{}", phi_label(phi));
    reports.push_back(harness::run_experiment(c));
    harness::emit_report(reports.back(), c.output);
    write_policies(reports.back(), c.output);
    print_report(reports.back());
  }
  const auto sweep = config.output.parent_path() / (config.output.stem().string() + "_sweep.csv");
  harness::emit_sweep(reports, sweep);
  fmt::print("wrote {}\n", sweep.string());
  return 0;
}

int bounds_command(const EnvFlags& envf, const std::string& algo, std::size_t horizon, learn::LearnerOptions options,
                   std::uint64_t stages) {
  const env::Environment env = envf.build(horizon);
  const learn::Algorithm algorithm = learn::parse_algorithm(algo);
  const std::size_t schedules = algorithm == learn::Algorithm::mcesp ? env.spec().num_agents() : 1;
  fmt::print("environment {}  horizon {}  algorithm {}  eps {}  delta {}  rewards {}\n", env.name(), horizon,
             learn::to_string(algorithm), options.eps, options.delta, options.normalize ? "normalized" : "raw");
  for (std::size_t s = 0; s < schedules; ++s) {
    const palo::PaloSchedule schedule = learn::learner_schedule(algorithm, env.spec(), options, s);
    if (schedules > 1) fmt::print("\nagent {}\n", s);
    for (std::size_t c = 0; c < schedule.components(); ++c) {
      fmt::print("component {}  lambda {}  neighbors {}\n", c, schedule.lambda(c), schedule.neighbors(c));
    }
    fmt::print("{:>3} {:>14} {:>10}", "m", "delta_m", "k_m");
    for (std::size_t c = 0; c < schedule.components(); ++c) {
      fmt::print(" {:>10} {:>12} {:>12}", fmt::format("k_m[{}]", c), fmt::format("eps*(1)[{}]", c),
                 fmt::format("eps*(k-1)[{}]", c));
    }
    fmt::print("\n");
    for (std::uint64_t m = 1; m <= stages; ++m) {
      const palo::Stage stage = schedule.stage(m);
      fmt::print("{:>3} {:>14.8g} {:>10}", m, stage.delta_m, stage.k_m);
      for (std::size_t c = 0; c < schedule.components(); ++c) {
        const std::uint64_t last = stage.k_m > 1 ? stage.k_m - 1 : 1;
        fmt::print(" {:>10} {:>12.6g} {:>12.6g}", schedule.k_m(m, c), schedule.epsilon_star(stage, 1, c).to_double(),
                   schedule.epsilon_star(stage, last, c).to_double());
      }
      fmt::print("\n");
    }
  }
  return 0;
}

int verify_command(const EnvFlags& envf, const std::string& policy_file, double eps, std::optional<std::string> mode,
                   bool raw) {
  const std::string text = read_file(policy_file);
  const env::Environment env = envf.build(policy_horizon(text));
  const ParsedPolicy parsed = read_policy(env.spec(), text);
  const std::string m = mode.value_or(parsed.kind == "mp" ? "mp" : "fmp");
  if (m != "mp" && m != "fmp") throw std::invalid_argument("--mode must be mp or fmp");
  const harness::VerifyResult r = harness::verify_local_optimum(
      env, parsed.policy, eps, m == "mp" ? harness::VerifyMode::mp : harness::VerifyMode::fmp, !raw);
  fmt::print("mode {}  eps {}  neighbors {}  worst {}\n", m, eps, r.neighbors_checked, r.worst_violation);
  if (r.worst_node) {
    fmt::print("worst neighbor: {} => {}\n", format_sequence(env.spec(), SequenceTree(env.spec()).sequence_of(*r.worst_node)),
               format_joint_action(env.spec(), *r.worst_action));
  }
  fmt::print("{}\n", r.locally_optimal ? "locally-optimal" : "not-locally-optimal");
  return r.locally_optimal ? 0 : kNotOptimal;
}

int oracle_command(const EnvFlags& envf, const std::string& policy_file, std::optional<std::uint64_t> samples,
                   std::uint64_t seed) {
  const std::string text = read_file(policy_file);
  const env::Environment env = envf.build(policy_horizon(text));
  const ParsedPolicy parsed = read_policy(env.spec(), text);
  try {
    const env::PolicyValue v = env::exact_policy_values(env, parsed.policy);
    fmt::print("team {}\n", v.team);
    for (std::size_t i = 0; i < v.agents.size(); ++i) fmt::print("agent {} {}\n", i, v.agents[i]);
    return 0;
  } catch (const env::OracleRefused& e) {
    if (!samples) throw;
    std::cerr << e.what() << "; falling back to Monte Carlo\n";
  }
  const env::MonteCarloEstimate est = env::monte_carlo_value(env, parsed.policy, *samples, seed);
  fmt::print("team {} +- {} (monte carlo, {} samples)\n", est.mean, est.std_error, est.samples);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monte Carlo exploring starts for teams of agents"};
  app.require_subcommand(1);

  harness::ExperimentConfig config;
  EnvFlags run_env;
  std::string algo = "fmp";
  std::string strategy = "iterated";
  std::vector<std::string> phis;
  std::string out;
  std::optional<std::string> config_file, progress, checkpoint_dir;
  bool raw = false, no_early = false, no_pruning = false;
  auto* run = app.add_subcommand("run", "Run a learner over several seeds and write CSV reports");
  run_env.add(run);
  run->add_option("--algo", algo, "mp, fmp or mcesp")->capture_default_str();
  run->add_option("--eps", config.eps)->capture_default_str();
  run->add_option("--delta", config.delta)->capture_default_str();
  run->add_option("--phi", phis, "Regret budget; several values (or a comma list) run a sweep")->delimiter(',');
  run->add_option("--horizon,-T", config.horizon)->capture_default_str();
  run->add_option("--seeds", config.seeds, "Seed list")->delimiter(',');
  run->add_option("--budget", config.budget, "Trajectory budget per seed")->capture_default_str();
  run->add_option("--strategy", strategy, "Exploring starts: iterated or random")->capture_default_str();
  run->add_option("--out", out, "Per-seed CSV path (default under $MCES_OUTPUT_DIR or ./results)");
  run->add_option("--workers", config.workers, "Seeds run in parallel")->capture_default_str();
  run->add_option("--wall-clock", config.wall_clock_seconds, "Per-run cap in seconds")->capture_default_str();
  run->add_flag("--raw-rewards", raw, "Estimate in raw reward units instead of normalized ones");
  run->add_flag("--no-early-dominance", no_early, "Only stop after a full k_m sweep");
  run->add_flag("--no-pruning", no_pruning, "Disable pruning and its bookkeeping");
  run->add_flag("--prune-persist", config.prune_persist, "Keep pruned sequences across transforms");
  run->add_option("--progress", progress, "Write JSONL progress events to this file");
  run->add_option("--checkpoint-dir", checkpoint_dir, "Checkpoint each seed here and resume from existing files");
  run->add_option("--checkpoint-every", config.checkpoint_every)->capture_default_str();
  run->add_option("--config", config_file, "key = value experiment file; its values override flags");

  EnvFlags bounds_env;
  std::string bounds_algo = "fmp";
  std::size_t bounds_horizon = 2;
  std::uint64_t stages = 5;
  bool bounds_raw = false, outside_root = false;
  learn::LearnerOptions bounds_options;
  auto* bounds = app.add_subcommand("bounds", "Print delta_m, k_m and envelope tables");
  bounds_env.add(bounds);
  bounds->add_option("--algo", bounds_algo)->capture_default_str();
  bounds->add_option("--horizon,-T", bounds_horizon)->capture_default_str();
  bounds->add_option("--eps", bounds_options.eps)->capture_default_str();
  bounds->add_option("--delta", bounds_options.delta)->capture_default_str();
  bounds->add_option("--stages", stages, "Number of transform stages to list")->capture_default_str();
  bounds->add_flag("--raw-rewards", bounds_raw);
  bounds->add_flag("--outside-root", outside_root, "Alternative grouping of the (k_m - 1) factor");

  EnvFlags verify_env;
  std::string verify_policy;
  double verify_eps = 0.1;
  std::optional<std::string> verify_mode;
  bool verify_raw = false;
  auto* verify = app.add_subcommand("verify", "Check a policy for epsilon-local optimality with the exact oracle");
  verify_env.add(verify);
  verify->add_option("--policy", verify_policy)->required();
  verify->add_option("--eps", verify_eps)->capture_default_str();
  verify->add_option("--mode", verify_mode, "mp or fmp (default: from the policy file's kind)");
  verify->add_flag("--raw-rewards", verify_raw);

  EnvFlags oracle_env;
  std::string oracle_policy;
  std::optional<std::uint64_t> mc_samples;
  std::uint64_t mc_seed = 0;
  auto* oracle = app.add_subcommand("oracle", "Print a policy's exact team and per-agent values");
  oracle_env.add(oracle);
  oracle->add_option("--policy", oracle_policy)->required();
  oracle->add_option("--monte-carlo", mc_samples, "Sample count to fall back on when the oracle refuses");
  oracle->add_option("--seed", mc_seed)->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      config.environment = run_env.name;
      config.discount = run_env.discount;
      if (run_env.data_dir) config.data_dir = *run_env.data_dir;
      config.algorithm = learn::parse_algorithm(algo);
      config.strategy = learn::parse_strategy(strategy);
      config.normalize = !raw;
      config.early_dominance = !no_early;
      config.pruning = !no_pruning;
      if (!out.empty()) config.output = out;
      if (progress) config.progress_path = *progress;
      if (checkpoint_dir) config.checkpoint_dir = *checkpoint_dir;
      return run_command(config, phis, config_file);
    }
    if (*bounds) {
      bounds_options.normalize = !bounds_raw;
      bounds_options.grouping = outside_root ? palo::FmpGrouping::outside_root : palo::FmpGrouping::inside_root;
      return bounds_command(bounds_env, bounds_algo, bounds_horizon, bounds_options, stages);
    }
    if (*verify) return verify_command(verify_env, verify_policy, verify_eps, verify_mode, verify_raw);
    if (*oracle) return oracle_command(oracle_env, oracle_policy, mc_samples, mc_seed);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
