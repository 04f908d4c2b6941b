#include "mces/learn/acceptance.hpp"

namespace mces::learn {

std::optional<Transform> mp_accept(const QTable& table, NodeId node, JointAction current,
                                   const palo::PaloSchedule& schedule, const palo::Stage& stage) {
  const std::uint64_t p = table.count(node, current);
  const ExtendedReal envelope = schedule.envelope(stage, p, p);
  if (envelope.is_infinite()) return std::nullopt;
  JointAction best = current;
  double best_q = table.q(0, node, current);
  for (std::uint32_t a = 0; a < table.actions(); ++a) {
    const JointAction ja{a};
    if (table.count(node, ja) != p) continue;
    const double q = table.q(0, node, ja);
    if (q > best_q || (q == best_q && a < best.index)) {
      best = ja;
      best_q = q;
    }
  }
  const double base = table.q(0, node, current);
  if (best == current || !exceeds_by(best_q, base, envelope)) return std::nullopt;
  return Transform{best, best_q - base};
}

bool fmp_accept(const QTable& table, NodeId node, JointAction current, JointAction candidate,
                const palo::PaloSchedule& schedule, const palo::Stage& stage) {
  const std::uint64_t p = table.count(node, candidate);
  const std::uint64_t q = table.count(node, current);
  for (std::size_t i = 0; i < table.components(); ++i) {
    if (!exceeds_by(table.q(i, node, candidate), table.q(i, node, current), schedule.envelope(stage, p, q, i))) {
      return false;
    }
  }
  return true;
}

std::optional<Transform> fmp_best_transform(const QTable& table, NodeId node, JointAction current,
                                            const palo::PaloSchedule& schedule, const palo::Stage& stage) {
  std::optional<Transform> best;
  for (std::uint32_t a = 0; a < table.actions(); ++a) {
    const JointAction ja{a};
    if (ja == current || !fmp_accept(table, node, current, ja, schedule, stage)) continue;
    double advantage = 0.0;
    for (std::size_t i = 0; i < table.components(); ++i) advantage += table.q(i, node, ja) - table.q(i, node, current);
    if (!best || advantage > best->advantage) best = Transform{ja, advantage};
  }
  return best;
}

bool dominates(const QTable& table, NodeId node, JointAction current, const palo::PaloSchedule& schedule,
               const palo::Stage& stage) {
  const std::uint64_t p = table.count(node, current);
  if (p == 0) return false;
  std::vector<double> margin(table.components());
  for (std::size_t i = 0; i < table.components(); ++i) {
    const ExtendedReal star = schedule.epsilon_star(stage, p, i);
    margin[i] = star.is_infinite() ? -1.0 : schedule.epsilon() - star.value();
  }
  for (std::uint32_t a = 0; a < table.actions(); ++a) {
    const JointAction ja{a};
    if (ja == current) continue;
    if (table.count(node, ja) != p) return false;
    bool blocked = false;
    for (std::size_t i = 0; i < table.components() && !blocked; ++i) {
      blocked = margin[i] > 0.0 && table.q(i, node, ja) - table.q(i, node, current) < margin[i];
    }
    if (!blocked) return false;
  }
  return true;
}

}  // namespace mces::learn
