#include "mces/env/domains.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace mces::env {

namespace {

std::vector<double> uniform(std::size_t n) { return std::vector<double>(n, 1.0 / static_cast<double>(n)); }

void check_probability(double p, const char* key) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument(fmt::format("config value {} = {} is not a probability", key, p));
}

// ---- tiger -----------------------------------------------------------------

enum TigerMove { kListen, kGood, kBad };

Environment tiger(const EnvConfig& cfg, std::size_t horizon) {
  cfg.require_only({"hear_accuracy", "reward_listen_listen", "reward_good_good", "reward_bad_bad", "reward_good_listen",
                    "reward_bad_listen", "reward_good_bad", "open_cost", "discount"});
  const double accuracy = cfg.number("hear_accuracy");
  check_probability(accuracy, "hear_accuracy");
  const double open_cost = cfg.number("open_cost");
  // payoff[m1][m2] with m in {listen, good door, bad door}
  std::array<std::array<double, 3>, 3> payoff{};
  payoff[kListen][kListen] = cfg.number("reward_listen_listen");
  payoff[kGood][kGood] = cfg.number("reward_good_good");
  payoff[kBad][kBad] = cfg.number("reward_bad_bad");
  payoff[kGood][kListen] = payoff[kListen][kGood] = cfg.number("reward_good_listen");
  payoff[kBad][kListen] = payoff[kListen][kBad] = cfg.number("reward_bad_listen");
  payoff[kGood][kBad] = payoff[kBad][kGood] = cfg.number("reward_good_bad");
  double gmin = payoff[0][0], gmax = payoff[0][0];
  for (const auto& row : payoff) {
    for (const double r : row) {
      gmin = std::min(gmin, r);
      gmax = std::max(gmax, r);
    }
  }

  std::vector<DomainSpec::Agent> agents;
  for (std::size_t i = 0; i < 2; ++i) {
    const double cost = -open_cost * static_cast<double>(i + 1);
    agents.push_back({{"listen", "open-left", "open-right"},
                      {"hear-left", "hear-right"},
                      {std::min(cost, 0.0), std::max(cost, 0.0)}});
  }
  DomainSpec spec(std::move(agents), horizon, cfg.number_or("discount", 1.0), {gmin, gmax});

  const auto move = [](State s, std::uint32_t a) {
    if (a == 0) return kListen;
    const State door = a - 1;  // 0 = left
    return door == s ? kBad : kGood;
  };
  const MixedRadix actions = spec.joint_actions();

  ModelDefinition m{spec, {"tiger-left", "tiger-right"}, uniform(2), {}, {}, {}, {}};
  m.transition = [](State s, JointAction a) -> std::vector<std::pair<State, double>> {
    if (a.index == 0) return {{s, 1.0}};
    return {{0, 0.5}, {1, 0.5}};
  };
  m.observation = [accuracy](State next, JointAction a) {
    if (a.index != 0) return uniform(4);
    std::vector<double> row(4);
    for (std::uint32_t o1 = 0; o1 < 2; ++o1) {
      for (std::uint32_t o2 = 0; o2 < 2; ++o2) {
        const double p1 = o1 == next ? accuracy : 1.0 - accuracy;
        const double p2 = o2 == next ? accuracy : 1.0 - accuracy;
        row[o1 * 2 + o2] = p1 * p2;
      }
    }
    return row;
  };
  m.local_reward = [open_cost](State, std::size_t agent, std::uint32_t a) {
    return a == 0 ? 0.0 : -open_cost * static_cast<double>(agent + 1);
  };
  m.global_reward = [payoff, move, actions](State s, JointAction a) {
    return payoff[move(s, actions.digit(a.index, 0))][move(s, actions.digit(a.index, 1))];
  };
  return Environment("tiger", std::move(m));
}

// ---- firefighting ----------------------------------------------------------

constexpr std::size_t kHouses = 4;
constexpr std::size_t kFireAgents = 3;

struct FireState {
  std::array<std::uint32_t, kHouses> level{};
  std::array<std::uint32_t, kFireAgents> position{};  // 0: house i, 1: house i+1

  static FireState decode(State s, std::uint32_t levels) {
    FireState out;
    for (std::size_t k = kFireAgents; k-- > 0;) {
      out.position[k] = s % 2;
      s /= 2;
    }
    for (std::size_t h = kHouses; h-- > 0;) {
      out.level[h] = s % levels;
      s /= levels;
    }
    return out;
  }
  State encode(std::uint32_t levels) const {
    State s = 0;
    for (const auto l : level) s = s * levels + l;
    for (const auto p : position) s = s * 2 + p;
    return s;
  }
};

Environment fire(const EnvConfig& cfg, std::size_t horizon) {
  cfg.require_only({"fire_levels", "spread_neighbor", "spread_alone", "single_fighter_clear",
                    "single_fighter_neighbor", "flame_probability", "initial_fire", "distance_scale", "discount"});
  const auto levels = static_cast<std::uint32_t>(cfg.number("fire_levels"));
  if (levels < 2) throw std::invalid_argument("fire_levels must be at least 2");
  const double spread_neighbor = cfg.number("spread_neighbor");
  const double spread_alone = cfg.number("spread_alone");
  const double clear = cfg.number("single_fighter_clear");
  const double clear_neighbor = cfg.number("single_fighter_neighbor");
  for (const double p : {spread_neighbor, spread_alone, clear, clear_neighbor}) check_probability(p, "fire dynamics");
  const std::vector<double> flame = cfg.numbers("flame_probability");
  const std::vector<double> initial_fire = cfg.numbers("initial_fire");
  if (flame.size() != levels || initial_fire.size() != levels) {
    throw std::invalid_argument("flame_probability and initial_fire need one entry per fire level");
  }
  for (const double p : flame) check_probability(p, "flame_probability");
  const double scale = cfg.number("distance_scale");
  const double max_level = levels - 1;

  std::vector<DomainSpec::Agent> agents;
  for (std::size_t i = 0; i < kFireAgents; ++i) {
    const double denom = scale - static_cast<double>(i + 1);
    if (denom <= 0.0) throw std::invalid_argument("distance_scale must exceed the agent count");
    agents.push_back({{fmt::format("fight-h{}", i + 1), fmt::format("fight-h{}", i + 2), "idle"},
                      {"no-flames", "flames"},
                      {-(1.0 + max_level) / denom, 0.0}});
  }
  DomainSpec spec(std::move(agents), horizon, cfg.number_or("discount", 1.0),
                  {-max_level * static_cast<double>(kHouses), 0.0});
  const MixedRadix actions = spec.joint_actions();
  const State num_states = static_cast<State>(std::pow(levels, kHouses)) * (1u << kFireAgents);

  std::vector<std::string> names;
  std::vector<double> initial(num_states);
  for (State s = 0; s < num_states; ++s) {
    const FireState f = FireState::decode(s, levels);
    names.push_back(fmt::format("fire{}{}{}{}-pos{}{}{}", f.level[0], f.level[1], f.level[2], f.level[3],
                                f.position[0], f.position[1], f.position[2]));
    double p = 1.0 / (1u << kFireAgents);
    for (const auto l : f.level) p *= initial_fire[l];
    initial[s] = p;
  }

  ModelDefinition m{spec, std::move(names), std::move(initial), {}, {}, {}, {}};
  m.transition = [=](State s, JointAction a) {
    const FireState f = FireState::decode(s, levels);
    FireState next = f;
    std::array<int, kHouses> fighters{};
    for (std::size_t i = 0; i < kFireAgents; ++i) {
      const std::uint32_t ai = actions.digit(a.index, i);
      if (ai < 2) {
        next.position[i] = ai;
        ++fighters[i + ai];
      }
    }
    // per-house outcomes: (level, probability), at most two each
    std::array<std::vector<std::pair<std::uint32_t, double>>, kHouses> outcomes;
    for (std::size_t h = 0; h < kHouses; ++h) {
      const std::uint32_t l = f.level[h];
      const bool neighbor = (h > 0 && f.level[h - 1] > 0) || (h + 1 < kHouses && f.level[h + 1] > 0);
      const std::uint32_t up = std::min<std::uint32_t>(l + 1, levels - 1);
      const std::uint32_t down = l == 0 ? 0 : l - 1;
      auto& out = outcomes[h];
      if (fighters[h] >= 2) {
        out = {{0, 1.0}};
      } else if (fighters[h] == 1) {
        const double p = neighbor ? clear_neighbor : clear;
        out = {{down, p}, {l, 1.0 - p}};
      } else if (neighbor) {
        out = {{up, spread_neighbor}, {l, 1.0 - spread_neighbor}};
      } else if (l > 0) {
        out = {{up, spread_alone}, {l, 1.0 - spread_alone}};
      } else {
        out = {{l, 1.0}};
      }
    }
    std::vector<std::pair<State, double>> result;
    for (const auto& [l0, p0] : outcomes[0]) {
      for (const auto& [l1, p1] : outcomes[1]) {
        for (const auto& [l2, p2] : outcomes[2]) {
          for (const auto& [l3, p3] : outcomes[3]) {
            next.level = {l0, l1, l2, l3};
            result.emplace_back(next.encode(levels), p0 * p1 * p2 * p3);
          }
        }
      }
    }
    return result;
  };
  m.observation = [=](State next, JointAction) {
    const FireState f = FireState::decode(next, levels);
    std::vector<double> row(1u << kFireAgents, 1.0);
    for (std::uint32_t o = 0; o < row.size(); ++o) {
      for (std::size_t i = 0; i < kFireAgents; ++i) {
        const bool seen = (o >> (kFireAgents - 1 - i)) & 1u;
        const double p = flame[f.level[i + f.position[i]]];
        row[o] *= seen ? p : 1.0 - p;
      }
    }
    return row;
  };
  m.local_reward = [=](State s, std::size_t agent, std::uint32_t a) {
    if (a == 2) return 0.0;
    const FireState f = FireState::decode(s, levels);
    const double distance = a == f.position[agent] ? 0.0 : 1.0;
    const double level = f.level[agent + a];
    return -(distance + level) / (scale - static_cast<double>(agent + 1));
  };
  m.global_reward = [=](State s, JointAction) {
    const FireState f = FireState::decode(s, levels);
    double sum = 0.0;
    for (const auto l : f.level) sum += l;
    return -sum;
  };
  return Environment("fire", std::move(m));
}

// ---- alignment -------------------------------------------------------------

enum AlignAction : std::uint32_t { kTurnCw, kTurnCcw, kEmit, kNoop };

Environment alignment(const EnvConfig& cfg, std::size_t pairs, std::size_t horizon) {
  cfg.require_only({"ir_accuracy", "aligned_reward", "misaligned_reward", "turn_cost", "emit_cost", "discount"});
  if (pairs == 0) throw std::invalid_argument("alignment needs at least one pair");
  const double accuracy = cfg.number("ir_accuracy");
  check_probability(accuracy, "ir_accuracy");
  const double aligned_reward = cfg.number("aligned_reward");
  const double misaligned_reward = cfg.number("misaligned_reward");
  const double turn_cost = cfg.number("turn_cost");
  const double emit_cost = cfg.number("emit_cost");
  const std::size_t robots = 2 * pairs;

  std::vector<DomainSpec::Agent> agents;
  for (std::size_t i = 0; i < robots; ++i) {
    const double index = static_cast<double>(i + 1);
    const double worst = std::min({0.0, -(turn_cost + index), -(emit_cost + index)});
    const double best = std::max({0.0, -(turn_cost + index), -(emit_cost + index)});
    agents.push_back({{"turn-cw", "turn-ccw", "emit-ir", "noop"}, {"no-ir", "ir"}, {worst, best}});
  }
  const double lo = std::min(aligned_reward, misaligned_reward) * static_cast<double>(pairs);
  const double hi = std::max(aligned_reward, misaligned_reward) * static_cast<double>(pairs);
  DomainSpec spec(std::move(agents), horizon, cfg.number_or("discount", 1.0), {lo, hi});
  const MixedRadix actions = spec.joint_actions();
  const MixedRadix orientation(std::vector<std::uint32_t>(robots, 2));  // 0 = facing the partner
  const State num_states = static_cast<State>(orientation.size());

  const auto turned = [=](State s, JointAction a, std::size_t robot) {
    const std::uint32_t ai = actions.digit(a.index, robot);
    const std::uint32_t o = orientation.digit(s, robot);
    return (ai == kTurnCw || ai == kTurnCcw) ? 1u - o : o;
  };
  const auto aligned_after = [=](State s, JointAction a, std::size_t pair) {
    return turned(s, a, 2 * pair) == 0 && turned(s, a, 2 * pair + 1) == 0;
  };

  std::vector<std::string> names;
  std::vector<double> initial(num_states, 0.0);
  double mass = 0.0;
  for (State s = 0; s < num_states; ++s) {
    std::string name = "orient";
    bool any_aligned = false;
    for (std::size_t r = 0; r < robots; ++r) name += orientation.digit(s, r) == 0 ? 'F' : 'A';
    for (std::size_t p = 0; p < pairs; ++p) {
      any_aligned = any_aligned || (orientation.digit(s, 2 * p) == 0 && orientation.digit(s, 2 * p + 1) == 0);
    }
    names.push_back(std::move(name));
    if (!any_aligned) {
      initial[s] = 1.0;
      mass += 1.0;
    }
  }
  for (double& p : initial) p /= mass;

  ModelDefinition m{spec, std::move(names), std::move(initial), {}, {}, {}, {}};
  m.transition = [=](State s, JointAction a) {
    // per pair: list of (orientation of robot 2p, of robot 2p+1, probability)
    std::vector<std::pair<State, double>> result{{0, 1.0}};
    for (std::size_t p = 0; p < pairs; ++p) {
      std::vector<std::array<std::uint32_t, 2>> configs;
      if (aligned_after(s, a, p)) {
        configs = {{0, 1}, {1, 0}, {1, 1}};
      } else {
        configs = {{turned(s, a, 2 * p), turned(s, a, 2 * p + 1)}};
      }
      const double q = 1.0 / static_cast<double>(configs.size());
      std::vector<std::pair<State, double>> grown;
      for (const auto& [partial, pr] : result) {
        for (const auto& c : configs) {
          State next = static_cast<State>(orientation.with_digit(partial, 2 * p, c[0]));
          next = static_cast<State>(orientation.with_digit(next, 2 * p + 1, c[1]));
          grown.emplace_back(next, pr * q);
        }
      }
      result = std::move(grown);
    }
    return result;
  };
  m.observation = [=](State next, JointAction a) {
    std::vector<double> row(std::size_t{1} << robots, 1.0);
    for (std::uint32_t o = 0; o < row.size(); ++o) {
      for (std::size_t r = 0; r < robots; ++r) {
        const std::size_t partner = r ^ 1u;
        const bool signal = actions.digit(a.index, partner) == kEmit && orientation.digit(next, partner) == 0;
        const double p_ir = signal ? accuracy : 1.0 - accuracy;
        const bool ir = (o >> (robots - 1 - r)) & 1u;
        row[o] *= ir ? p_ir : 1.0 - p_ir;
      }
    }
    return row;
  };
  m.local_reward = [=](State, std::size_t agent, std::uint32_t a) {
    const double index = static_cast<double>(agent + 1);
    if (a == kTurnCw || a == kTurnCcw) return -(turn_cost + index);
    if (a == kEmit) return -(emit_cost + index);
    return 0.0;
  };
  m.global_reward = [=](State s, JointAction a) {
    double sum = 0.0;
    for (std::size_t p = 0; p < pairs; ++p) sum += aligned_after(s, a, p) ? aligned_reward : misaligned_reward;
    return sum;
  };
  return Environment(pairs == 1 ? "align2" : fmt::format("align{}", robots), std::move(m));
}

}  // namespace

Environment make_tiger(const EnvConfig& config, std::size_t horizon) { return tiger(config, horizon); }
Environment make_fire(const EnvConfig& config, std::size_t horizon) { return fire(config, horizon); }
Environment make_alignment(const EnvConfig& config, std::size_t pairs, std::size_t horizon) {
  return alignment(config, pairs, horizon);
}

std::vector<std::string> environment_names() { return {"tiger", "fire", "align2", "align4"}; }

Environment make_environment(std::string_view name, std::size_t horizon,
                             const std::optional<std::filesystem::path>& data_dir) {
  const std::filesystem::path dir = data_dir.value_or(default_data_dir());
  const auto load = [&] { return EnvConfig::load(dir / (std::string(name) + ".cfg")); };
  if (name == "tiger") return make_tiger(load(), horizon);
  if (name == "fire") return make_fire(load(), horizon);
  if (name == "align2") return make_alignment(load(), 1, horizon);
  if (name == "align4") return make_alignment(load(), 2, horizon);
  throw std::invalid_argument(fmt::format("unknown environment '{}' (expected tiger, fire, align2 or align4)", name));
}

}  // namespace mces::env
