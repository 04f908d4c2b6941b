#include "mces/policy_io.hpp"

#include <charconv>
#include <optional>
#include <stdexcept>
#include <vector>

#include <fmt/format.h>

#include "mces/sequence_tree.hpp"

namespace mces {

namespace {

constexpr std::string_view kMagic = "mces-policy 1";

std::string tuple(const DomainSpec& spec, std::uint64_t index, bool actions) {
  std::string out = "(";
  for (std::size_t i = 0; i < spec.num_agents(); ++i) {
    if (i) out += ',';
    if (actions) {
      out += spec.action_name(i, spec.joint_actions().digit(index, i));
    } else {
      out += spec.observation_name(i, spec.joint_observations().digit(index, i));
    }
  }
  return out + ")";
}

[[noreturn]] void fail(std::size_t line, const std::string& what) {
  throw std::invalid_argument(fmt::format("policy line {}: {}", line, what));
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

// Parses "(x,y,...)" against per-agent names; returns the mixed-radix index.
std::uint64_t parse_tuple(const DomainSpec& spec, std::string_view s, bool actions, std::size_t line) {
  s = trim(s);
  if (s.size() < 2 || s.front() != '(' || s.back() != ')') fail(line, fmt::format("expected a tuple, got '{}'", s));
  s = s.substr(1, s.size() - 2);
  std::vector<std::uint32_t> digits;
  for (std::size_t i = 0; i < spec.num_agents(); ++i) {
    const std::size_t comma = s.find(',');
    const bool last = i + 1 == spec.num_agents();
    if (last != (comma == std::string_view::npos)) fail(line, "wrong number of tuple components");
    const std::string_view name = trim(last ? s : s.substr(0, comma));
    const auto& names = actions ? spec.agents()[i].actions : spec.agents()[i].observations;
    std::optional<std::uint32_t> found;
    for (std::uint32_t k = 0; k < names.size(); ++k) {
      if (names[k] == name) found = k;
    }
    if (!found) fail(line, fmt::format("unknown symbol '{}' for agent {}", name, i));
    digits.push_back(*found);
    if (!last) s.remove_prefix(comma + 1);
  }
  const MixedRadix& radix = actions ? spec.joint_actions() : spec.joint_observations();
  return radix.encode(digits);
}

std::string_view header_value(std::string_view line, std::string_view key, std::size_t number) {
  if (line.substr(0, key.size()) != key || line.size() <= key.size() || line[key.size()] != ' ') {
    fail(number, fmt::format("expected '{} <value>'", key));
  }
  return trim(line.substr(key.size() + 1));
}

std::size_t parse_size(std::string_view s, std::size_t line) {
  std::size_t out = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  if (ec != std::errc() || ptr != s.data() + s.size()) fail(line, fmt::format("expected an integer, got '{}'", s));
  return out;
}

}  // namespace

std::string format_sequence(const DomainSpec& spec, const JointObservationSeq& sequence) {
  std::string out = "[";
  for (std::size_t t = 0; t < sequence.size(); ++t) {
    if (t) out += ' ';
    out += tuple(spec, sequence[t].index, false);
  }
  return out + "]";
}

std::string format_joint_action(const DomainSpec& spec, JointAction action) {
  return tuple(spec, action.index, true);
}

std::string write_policy(const DomainSpec& spec, const JointPolicy& policy, std::string_view kind) {
  const SequenceTree tree(spec);
  std::string out = fmt::format("{}\nkind {}\nagents {}\nhorizon {}\n", kMagic, kind, spec.num_agents(), spec.horizon());
  for (std::uint32_t n = 0; n < tree.size(); ++n) {
    out += format_sequence(spec, tree.sequence_of(NodeId{n}));
    out += " => ";
    out += format_joint_action(spec, policy.action(NodeId{n}));
    out += '\n';
  }
  return out;
}

ParsedPolicy read_policy(const DomainSpec& spec, std::string_view text) {
  std::vector<std::string_view> lines;
  while (!text.empty()) {
    const std::size_t nl = text.find('\n');
    lines.push_back(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
  }
  std::size_t k = 0;
  auto next = [&]() -> std::string_view {
    while (k < lines.size() && trim(lines[k]).empty()) ++k;
    if (k == lines.size()) fail(k, "unexpected end of input");
    return trim(lines[k++]);
  };
  if (next() != kMagic) fail(k, "missing 'mces-policy 1' header");
  std::string kind(header_value(next(), "kind", k));
  if (kind.find_first_of(" \t") != std::string::npos) fail(k, "kind must be a single word");
  if (parse_size(header_value(next(), "agents", k), k) != spec.num_agents()) fail(k, "agent count does not match");
  if (parse_size(header_value(next(), "horizon", k), k) != spec.horizon()) fail(k, "horizon does not match");

  const SequenceTree tree(spec);
  std::vector<std::optional<JointAction>> table(tree.size());
  for (; k < lines.size(); ++k) {
    const std::string_view line = trim(lines[k]);
    const std::size_t number = k + 1;
    if (line.empty()) continue;
    const std::size_t arrow = line.find("=>");
    if (arrow == std::string_view::npos) fail(number, "expected '<sequence> => <action>'");
    std::string_view seq = trim(line.substr(0, arrow));
    if (seq.size() < 2 || seq.front() != '[' || seq.back() != ']') fail(number, "sequence must be bracketed");
    seq = trim(seq.substr(1, seq.size() - 2));
    JointObservationSeq sequence;
    while (!seq.empty()) {
      const std::size_t close = seq.find(')');
      if (close == std::string_view::npos) fail(number, "unterminated observation tuple");
      sequence.push_back(JointObservation{static_cast<std::uint32_t>(parse_tuple(spec, seq.substr(0, close + 1), false, number))});
      seq = trim(seq.substr(close + 1));
    }
    if (sequence.size() >= spec.horizon()) fail(number, "sequence is not shorter than the horizon");
    const NodeId node = tree.node_of(sequence);
    if (table[node.index]) fail(number, "duplicate sequence");
    table[node.index] = JointAction{static_cast<std::uint32_t>(parse_tuple(spec, line.substr(arrow + 2), true, number))};
  }
  std::vector<JointAction> dense(tree.size());
  for (std::uint32_t n = 0; n < tree.size(); ++n) {
    if (!table[n]) {
      throw std::invalid_argument(
          fmt::format("policy has no entry for sequence {}", format_sequence(spec, tree.sequence_of(NodeId{n}))));
    }
    dense[n] = *table[n];
  }
  return {std::move(kind), JointPolicy(spec, std::move(dense))};
}

}  // namespace mces
