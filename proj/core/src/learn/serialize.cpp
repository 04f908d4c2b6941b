#include "serialize.hpp"

#include <stdexcept>

namespace mces::learn::detail {

json extended_to_json(const ExtendedReal& x) {
  if (x.is_infinite()) return "inf";
  return x.value();
}

ExtendedReal extended_from_json(const json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() != "inf") throw std::invalid_argument("checkpoint: bad extended real");
    return ExtendedReal::infinity();
  }
  return ExtendedReal(j.get<double>());
}

json to_json(const LearnerOptions& o) {
  return {{"eps", o.eps},
          {"delta", o.delta},
          {"strategy", std::string(to_string(o.strategy))},
          {"budget", o.budget},
          {"seed", o.seed},
          {"normalize", o.normalize},
          {"phi", o.phi ? extended_to_json(*o.phi) : json(nullptr)},
          {"prune_persist", o.prune_persist},
          {"early_dominance", o.early_dominance},
          {"grouping", o.grouping == palo::FmpGrouping::inside_root ? "inside-root" : "outside-root"},
          {"convention", o.convention == NeighborhoodConvention::verbatim ? "verbatim" : "alternatives"}};
}

LearnerOptions options_from_json(const json& j, const LearnerOptions& runtime) {
  LearnerOptions o = runtime;
  o.eps = j.at("eps").get<double>();
  o.delta = j.at("delta").get<double>();
  o.strategy = parse_strategy(j.at("strategy").get<std::string>());
  o.budget = j.at("budget").get<std::uint64_t>();
  o.seed = j.at("seed").get<std::uint64_t>();
  o.normalize = j.at("normalize").get<bool>();
  o.phi = j.at("phi").is_null() ? std::nullopt : std::optional<ExtendedReal>(extended_from_json(j.at("phi")));
  o.prune_persist = j.at("prune_persist").get<bool>();
  o.early_dominance = j.at("early_dominance").get<bool>();
  o.grouping = j.at("grouping").get<std::string>() == "inside-root" ? palo::FmpGrouping::inside_root
                                                                     : palo::FmpGrouping::outside_root;
  o.convention = j.at("convention").get<std::string>() == "verbatim" ? NeighborhoodConvention::verbatim
                                                                      : NeighborhoodConvention::alternatives_per_node;
  return o;
}

json to_json(const TransformRecord& r) {
  return {{"stage", r.stage},     {"agent", r.agent},     {"node", r.node.index},     {"from", r.from.index},
          {"to", r.to.index},     {"samples", r.samples}, {"count", r.count},         {"q_from", r.q_from},
          {"q_to", r.q_to},       {"envelope", r.envelope}};
}

TransformRecord transform_from_json(const json& j) {
  TransformRecord r;
  r.stage = j.at("stage").get<std::uint64_t>();
  r.agent = j.at("agent").get<std::size_t>();
  r.node = NodeId{j.at("node").get<std::uint32_t>()};
  r.from = JointAction{j.at("from").get<std::uint32_t>()};
  r.to = JointAction{j.at("to").get<std::uint32_t>()};
  r.samples = j.at("samples").get<std::uint64_t>();
  r.count = j.at("count").get<std::uint64_t>();
  r.q_from = j.at("q_from").get<std::vector<double>>();
  r.q_to = j.at("q_to").get<std::vector<double>>();
  r.envelope = j.at("envelope").get<std::vector<double>>();
  return r;
}

json to_json(const prune::PrunedEntry& e) {
  return {{"node", e.node.index}, {"regret", e.regret}, {"count", e.count}, {"probability", e.probability}};
}

prune::PrunedEntry pruned_from_json(const json& j) {
  return {NodeId{j.at("node").get<std::uint32_t>()}, j.at("regret").get<double>(), j.at("count").get<std::uint64_t>(),
          j.at("probability").get<double>()};
}

json checkpoint_header(Algorithm algorithm, const env::Environment& env, const LearnerOptions& options) {
  return {{"format", "mces-checkpoint"},
          {"version", kCheckpointVersion},
          {"algorithm", std::string(to_string(algorithm))},
          {"environment", env.name()},
          {"horizon", env.spec().horizon()},
          {"discount", env.spec().discount()},
          {"options", to_json(options)}};
}

void check_header(const json& j, const env::Environment& env) {
  if (j.value("format", "") != "mces-checkpoint") throw std::invalid_argument("not a learner checkpoint");
  if (j.at("version").get<int>() != kCheckpointVersion) throw std::invalid_argument("unsupported checkpoint version");
  if (j.at("environment").get<std::string>() != env.name() || j.at("horizon").get<std::size_t>() != env.spec().horizon() ||
      j.at("discount").get<double>() != env.spec().discount()) {
    throw std::invalid_argument("checkpoint was written for a different environment");
  }
}

}  // namespace mces::learn::detail
