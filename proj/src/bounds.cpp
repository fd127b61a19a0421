#include <cmath>
#include <map>

#include "oblot/engine.hpp"

namespace oblot {

std::size_t epochs_used(const Trace& t, std::size_t first_round, std::size_t last_round) {
  FairnessLedger ledger(t.n, 0);
  bool partial = false;
  for (const auto& ev : t.events) {
    if (ev.round < first_round || ev.round > last_round) continue;
    partial = !ledger.record(ev.round, ev.active);
  }
  return ledger.epochs + (partial ? 1 : 0);
}

std::vector<BoundReport> verify_bounds(const Trace& t) {
  std::vector<BoundReport> out;
  auto report = [&](std::string name, double bound, std::size_t observed) {
    BoundReport b;
    b.name = std::move(name);
    b.n = t.n;
    b.rho = t.rho;
    b.delta = t.delta;
    b.max_pair = t.max_pair;
    b.bound = bound;
    b.observed = observed;
    b.conclusive = t.formed_at.has_value();
    b.pass = b.conclusive && static_cast<double>(observed) <= bound;
    out.push_back(b);
  };
  const std::size_t end = t.formed_at ? *t.formed_at : (t.events.empty() ? 0 : t.events.back().round);
  const std::size_t total = epochs_used(t, 1, end);

  if (t.algorithm == AlgorithmKind::SeqPF) {
    std::map<Stage, std::size_t> per_stage;
    std::size_t i = 0;
    while (i < t.events.size() && t.events[i].round <= end) {
      std::size_t j = i;
      while (j + 1 < t.events.size() && t.events[j + 1].round <= end && t.events[j + 1].stage == t.events[i].stage) ++j;
      per_stage[t.events[i].stage] += epochs_used(t, t.events[i].round, t.events[j].round);
      i = j + 1;
    }
    const double c = std::ceil(t.rho / t.delta);
    const double n = static_cast<double>(t.n);
    report("initialization", 1, per_stage[Stage::Initialization]);
    report("finalization", c, per_stage[Stage::Finalization]);
    report("leader-configuration", c + 1, per_stage[Stage::LeaderConfiguration]);
    report("partial-pattern-formation", 2 * n * c, per_stage[Stage::PartialPatternFormation]);
    report("seq-pf-total", 2 * (n + 1) * c + 2, total);
  } else if (t.algorithm == AlgorithmKind::SeqPFSmall) {
    const double n = static_cast<double>(t.n);
    const double c = t.max_pair > 0.0 ? std::ceil(t.max_pair / t.delta) : 0.0;
    report("seq-pf-small-total", 2 * std::max(0.0, n - 2) * c + 2, total);
  } else {
    report("formation", std::numeric_limits<double>::infinity(), total);
  }
  return out;
}

}  // namespace oblot
