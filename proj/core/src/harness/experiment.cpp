#include "mces/harness/experiment.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <thread>

#include <fmt/format.h>
#include <json.hpp>

#include "mces/env/domains.hpp"
#include "mces/env/env_config.hpp"
#include "mces/env/oracle.hpp"
#include "mces/sequence_tree.hpp"

namespace mces::harness {

namespace {

constexpr std::uint64_t kMonteCarloSamples = 100'000;

bool is_known_environment(const std::string& name) {
  for (const auto& n : env::environment_names()) {
    if (n == name) return true;
  }
  return false;
}

ExtendedReal parse_phi(const std::string& text) {
  if (text == "inf" || text == "+inf" || text == "infinity") return ExtendedReal::infinity();
  std::size_t used = 0;
  const double x = std::stod(text, &used);
  if (used != text.size()) throw std::invalid_argument("bad phi value '" + text + "'");
  return ExtendedReal(x);
}

bool parse_bool(const std::string& text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw std::invalid_argument("expected a boolean, got '" + text + "'");
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = text.find(',', start);
    std::string item = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    while (!item.empty() && item.front() == ' ') item.erase(item.begin());
    while (!item.empty() && item.back() == ' ') item.pop_back();
    if (!item.empty()) out.push_back(item);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_atomically(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    out << text;
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace

std::filesystem::path checkpoint_path(const std::filesystem::path& dir, std::uint64_t seed) {
  return dir / fmt::format("seed-{}.ckpt.json", seed);
}

void ExperimentConfig::validate() const {
  if (!is_known_environment(environment)) throw std::invalid_argument(fmt::format("unknown environment '{}'", environment));
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("eps must lie in (0, 1)");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
  if (phi < ExtendedReal(0.0)) throw std::invalid_argument("phi must be nonnegative");
  if (horizon < 1) throw std::invalid_argument("horizon must be at least 1");
  if (discount && !(*discount > 0.0 && *discount <= 1.0)) throw std::invalid_argument("discount must lie in (0, 1]");
  if (seeds.empty()) throw std::invalid_argument("at least one seed is required");
  if (budget == 0) throw std::invalid_argument("budget must be positive");
  if (!seed_budgets.empty() && seed_budgets.size() != seeds.size()) {
    throw std::invalid_argument("seed_budgets needs one entry per seed");
  }
  if (workers == 0) throw std::invalid_argument("workers must be at least 1");
  if (checkpoint_dir && checkpoint_every == 0) throw std::invalid_argument("checkpoint interval must be positive");
  if (!(wall_clock_seconds > 0.0)) throw std::invalid_argument("wall-clock cap must be positive");
}

Aggregate aggregate(const std::vector<double>& values) {
  Aggregate a;
  if (values.empty()) return a;
  double sum = 0.0;
  for (const double v : values) sum += v;
  const double n = static_cast<double>(values.size());
  a.mean = sum / n;
  if (values.size() > 1) {
    double ss = 0.0;
    for (const double v : values) ss += (v - a.mean) * (v - a.mean);
    a.std_error = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
  }
  return a;
}

PolicyEvaluation evaluate_policy(const env::Environment& env, const JointPolicy& policy, std::uint64_t seed) {
  try {
    return {env::exact_policy_value(env, policy), "exact"};
  } catch (const env::OracleRefused&) {
    return {env::monte_carlo_value(env, policy, kMonteCarloSamples, seed).mean, "monte-carlo"};
  }
}

env::Environment experiment_environment(const ExperimentConfig& config) {
  env::Environment e = env::make_environment(config.environment, config.horizon, config.data_dir);
  if (config.discount) e = e.with_discount(*config.discount);
  return e;
}

learn::LearnerOptions learner_options(const ExperimentConfig& config, std::uint64_t seed, std::uint64_t budget) {
  learn::LearnerOptions o;
  o.eps = config.eps;
  o.delta = config.delta;
  o.strategy = config.strategy;
  o.budget = budget;
  o.seed = seed;
  o.normalize = config.normalize;
  if (config.pruning) o.phi = config.phi;
  o.prune_persist = config.prune_persist;
  o.early_dominance = config.early_dominance;
  o.wall_clock_seconds = config.wall_clock_seconds;
  return o;
}

JointPolicy initial_policy(const DomainSpec& spec, std::uint64_t seed) {
  RngStream rng(seed, streams::initial_policy());
  return JointPolicy::random(spec, rng);
}

RunReport run_experiment(const ExperimentConfig& config) {
  config.validate();
  const env::Environment env = experiment_environment(config);
  (void)SequenceTree(env.spec());  // rejects horizons whose policy tables cannot be built

  RunReport report;
  report.config = config;
  report.rows.resize(config.seeds.size());

  std::mutex progress_mutex;
  std::ofstream progress;
  if (config.progress_path) {
    if (config.progress_path->has_parent_path()) std::filesystem::create_directories(config.progress_path->parent_path());
    progress.open(*config.progress_path);
    if (!progress) throw std::runtime_error("cannot open progress file " + config.progress_path->string());
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const auto worker = [&] {
    for (std::size_t k = next++; k < config.seeds.size(); k = next++) {
      try {
        const std::uint64_t seed = config.seeds[k];
        const std::uint64_t budget = config.seed_budgets.empty() ? config.budget : config.seed_budgets[k];
        learn::LearnerOptions options = learner_options(config, seed, budget);
        if (progress.is_open()) {
          options.progress = [&, seed](const learn::ProgressEvent& e) {
            const nlohmann::json line = {{"seed", seed},           {"event", std::string(e.kind)},
                                         {"samples", e.samples},   {"transforms", e.transforms},
                                         {"k_m", e.k_m},           {"value", e.value_estimate}};
            std::lock_guard lock(progress_mutex);
            progress << line.dump() << '\n';
          };
        }
        const JointPolicy start = initial_policy(env.spec(), seed);
        std::unique_ptr<learn::Learner> learner;
        std::function<void(const learn::Learner&)> save;
        if (config.checkpoint_dir) {
          const std::filesystem::path file = checkpoint_path(*config.checkpoint_dir, seed);
          if (std::filesystem::exists(file)) learner = learn::restore_learner(env, read_text(file), options);
          save = [file](const learn::Learner& l) { write_atomically(file, l.checkpoint()); };
        }
        if (!learner) learner = learn::make_learner(config.algorithm, env, start, options);
        const learn::LearnerResult result = learner->run(save, config.checkpoint_every);
        const PolicyEvaluation before = evaluate_policy(env, start, seed);
        const PolicyEvaluation after = evaluate_policy(env, result.policy, seed);

        RunRow& row = report.rows[k];
        row.seed = seed;
        row.initial_value = before.value;
        row.final_value = after.value;
        row.samples = result.samples;
        row.transforms = result.transforms;
        row.samples_per_transform =
            static_cast<double>(result.samples) / static_cast<double>(std::max<std::uint64_t>(1, result.transforms));
        row.k_m = result.k_m;
        row.neighbors = result.neighbors;
        row.effective_neighbors = result.effective_neighbors;
        row.termination = result.termination;
        row.pruned = result.pruned;
        row.value_method = before.method == "exact" && after.method == "exact" ? "exact" : "monte-carlo";
        row.final_policy = result.policy;
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const unsigned threads = std::min<unsigned>(config.workers, static_cast<unsigned>(config.seeds.size()));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return report;
}

std::vector<RunReport> run_sweep(const ExperimentConfig& config, const std::vector<ExtendedReal>& phis) {
  std::vector<RunReport> out;
  for (const ExtendedReal& phi : phis) {
    ExperimentConfig c = config;
    c.phi = phi;
    c.phi_sweep.clear();
    out.push_back(run_experiment(c));
  }
  return out;
}

ExperimentConfig apply_config_file(ExperimentConfig base, const std::filesystem::path& path) {
  const env::EnvConfig file = env::EnvConfig::load(path);
  file.require_only({"env", "algo", "eps", "delta", "phi", "horizon", "seeds", "budget", "strategy", "out",
                     "wall_clock", "workers", "normalize", "discount", "early_dominance", "prune_persist", "data_dir",
                     "progress", "checkpoint_dir", "checkpoint_every", "pruning"});
  if (file.has("env")) base.environment = file.text("env");
  if (file.has("algo")) base.algorithm = learn::parse_algorithm(file.text("algo"));
  if (file.has("eps")) base.eps = file.number("eps");
  if (file.has("delta")) base.delta = file.number("delta");
  if (file.has("phi")) {
    const std::vector<std::string> items = split_list(file.text("phi"));
    base.phi_sweep.clear();
    for (const auto& item : items) base.phi_sweep.push_back(parse_phi(item));
    if (base.phi_sweep.size() == 1) {
      base.phi = base.phi_sweep.front();
      base.phi_sweep.clear();
    }
  }
  if (file.has("horizon")) base.horizon = static_cast<std::size_t>(file.number("horizon"));
  if (file.has("seeds")) {
    base.seeds.clear();
    for (const auto& item : split_list(file.text("seeds"))) base.seeds.push_back(std::stoull(item));
  }
  if (file.has("budget")) base.budget = static_cast<std::uint64_t>(file.number("budget"));
  if (file.has("strategy")) base.strategy = learn::parse_strategy(file.text("strategy"));
  if (file.has("out")) base.output = file.text("out");
  if (file.has("wall_clock")) base.wall_clock_seconds = file.number("wall_clock");
  if (file.has("workers")) base.workers = static_cast<unsigned>(file.number("workers"));
  if (file.has("pruning")) base.pruning = parse_bool(file.text("pruning"));
  if (file.has("normalize")) base.normalize = parse_bool(file.text("normalize"));
  if (file.has("discount")) base.discount = file.number("discount");
  if (file.has("early_dominance")) base.early_dominance = parse_bool(file.text("early_dominance"));
  if (file.has("prune_persist")) base.prune_persist = parse_bool(file.text("prune_persist"));
  if (file.has("data_dir")) base.data_dir = file.text("data_dir");
  if (file.has("progress")) base.progress_path = file.text("progress");
  if (file.has("checkpoint_dir")) base.checkpoint_dir = file.text("checkpoint_dir");
  if (file.has("checkpoint_every")) base.checkpoint_every = static_cast<std::uint64_t>(file.number("checkpoint_every"));
  return base;
}

std::filesystem::path default_output_dir() {
  if (const char* dir = std::getenv("MCES_OUTPUT_DIR"); dir != nullptr && *dir != '\0') return dir;
  return "results";
}

}  // namespace mces::harness
