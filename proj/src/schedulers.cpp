#include "oblot/schedulers.hpp"

#include <algorithm>
#include <numeric>

#include "oblot/errors.hpp"

namespace oblot {

std::size_t Rng::below(std::size_t n) {
  if (n == 0) throw UsageError("Rng::below(0)");
  const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % n);
  std::uint64_t x;
  do x = gen_();
  while (x >= limit);
  return static_cast<std::size_t>(x % n);
}

std::string to_string(ActivationKind k) {
  switch (k) {
    case ActivationKind::FSync: return "fsync";
    case ActivationKind::SSyncRandom: return "ssync-random";
    case ActivationKind::SeqRandom: return "seq-random";
    case ActivationKind::SeqRoundRobin: return "seq-round-robin";
    case ActivationKind::Scripted: return "scripted";
    case ActivationKind::Interactive: return "interactive";
  }
  return "?";
}

std::string to_string(MovementKind k) {
  switch (k) {
    case MovementKind::Rigid: return "rigid";
    case MovementKind::WorstCaseDelta: return "worst-case-delta";
    case MovementKind::Random: return "random";
    case MovementKind::Scripted: return "scripted";
    case MovementKind::Interactive: return "interactive";
  }
  return "?";
}

ActivationKind activation_kind_from(const std::string& s) {
  for (auto k : {ActivationKind::FSync, ActivationKind::SSyncRandom, ActivationKind::SeqRandom,
                 ActivationKind::SeqRoundRobin, ActivationKind::Scripted, ActivationKind::Interactive})
    if (to_string(k) == s) return k;
  throw UsageError("unknown activation kind '" + s + "'");
}

MovementKind movement_kind_from(const std::string& s) {
  for (auto k : {MovementKind::Rigid, MovementKind::WorstCaseDelta, MovementKind::Random, MovementKind::Scripted,
                 MovementKind::Interactive})
    if (to_string(k) == s) return k;
  throw UsageError("unknown movement kind '" + s + "'");
}

bool is_sequential(ActivationKind k) { return k != ActivationKind::FSync && k != ActivationKind::SSyncRandom; }

std::size_t default_window(ActivationKind k, std::size_t n) {
  switch (k) {
    case ActivationKind::SeqRoundRobin:
    case ActivationKind::FSync: return n;
    case ActivationKind::SeqRandom:
    case ActivationKind::SSyncRandom: return 2 * n;
    default: return 50 * n;
  }
}

FairnessLedger::FairnessLedger(std::size_t n, std::size_t w)
    : last_activation(n, 0), window(w), since_boundary(n, false) {}

std::vector<RobotId> FairnessLedger::starved(std::size_t round) const {
  std::vector<RobotId> out;
  if (window == 0) return out;
  // earliest deadline first: robot i must run by last_activation[i] + window
  std::vector<RobotId> order(last_activation.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](RobotId a, RobotId b) { return last_activation[a] < last_activation[b]; });
  std::size_t urgent = 0;
  for (std::size_t j = 0; j < order.size(); ++j)
    if (last_activation[order[j]] + window <= round + j) urgent = j + 1;
  out.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(urgent));
  return out;
}

bool FairnessLedger::record(std::size_t round, const std::vector<RobotId>& active) {
  for (RobotId r : active) {
    if (r >= last_activation.size()) throw UsageError("activation of unknown robot " + std::to_string(r));
    last_activation[r] = round;
    since_boundary[r] = true;
  }
  if (std::all_of(since_boundary.begin(), since_boundary.end(), [](bool b) { return b; })) {
    ++epochs;
    epoch_marks.push_back(round);
    std::fill(since_boundary.begin(), since_boundary.end(), false);
    return true;
  }
  return false;
}

Activator::Activator(ActivationPolicy policy, std::size_t n)
    : policy_(std::move(policy)),
      n_(n),
      rng_(policy_.seed),
      ledger_(n, policy_.window ? policy_.window : default_window(policy_.kind, n)) {
  if (n == 0) throw UsageError("activator: no robots");
  if (ledger_.window < n) ledger_.window = n;
}

std::optional<RobotId> Activator::forced(std::size_t round) const {
  auto s = ledger_.starved(round);
  if (s.empty()) return std::nullopt;
  return s.front();
}

std::vector<RobotId> Activator::next(std::size_t round) {
  std::vector<RobotId> out;
  switch (policy_.kind) {
    case ActivationKind::FSync:
      out.resize(n_);
      std::iota(out.begin(), out.end(), 0);
      break;
    case ActivationKind::SeqRoundRobin:
      out = {rr_next_};
      rr_next_ = (rr_next_ + 1) % n_;
      break;
    case ActivationKind::SeqRandom: {
      auto f = forced(round);
      out = {f ? *f : rng_.below(n_)};
      break;
    }
    case ActivationKind::SSyncRandom: {
      std::vector<bool> pick(n_, false);
      bool any = false;
      while (!any)
        for (std::size_t i = 0; i < n_; ++i) any |= (pick[i] = (rng_.next() >> 63) != 0);
      for (RobotId r : ledger_.starved(round)) pick[r] = true;
      for (std::size_t i = 0; i < n_; ++i)
        if (pick[i]) out.push_back(i);
      break;
    }
    case ActivationKind::Scripted: {
      if (script_pos_ < policy_.script.size()) {
        RobotId r = policy_.script[script_pos_++];
        if (r >= n_) throw UsageError("script names unknown robot " + std::to_string(r));
        auto urgent = ledger_.starved(round);
        bool tight = !urgent.empty() && ledger_.last_activation[urgent.front()] + ledger_.window <= round;
        auto f = forced(round);
        if (f && (tight ? *f != r : std::find(urgent.begin(), urgent.end(), r) == urgent.end()))
          throw ContractViolation("scripted activation starves robot " + std::to_string(*f) + " beyond the window");
        out = {r};
      } else {
        out = {rr_next_};
        rr_next_ = (rr_next_ + 1) % n_;
      }
      break;
    }
    case ActivationKind::Interactive:
      throw UsageError("interactive activation is driven by the session, not drawn");
  }
  ledger_.record(round, out);
  return out;
}

double clamp_stop(double d, double delta, double fraction) {
  fraction = std::clamp(fraction, 0.0, 1.0);
  return std::max(std::min(delta, d), fraction * d);
}

double Mover::decide(Point start, Point intended, std::optional<double> fraction) {
  const double d = distance(start, intended);
  if (policy_.kind == MovementKind::Scripted) {
    // one entry per activation, moving or not
    double f = script_pos_ < policy_.script.size() ? policy_.script[script_pos_++] : 1.0;
    return clamp_stop(d, policy_.delta, f);
  }
  if (d <= policy_.delta) return d;
  switch (policy_.kind) {
    case MovementKind::Rigid: return d;
    case MovementKind::WorstCaseDelta: return policy_.delta;
    case MovementKind::Random: return policy_.delta + (d - policy_.delta) * rng_.uniform01();
    case MovementKind::Scripted: break;
    case MovementKind::Interactive: return clamp_stop(d, policy_.delta, fraction.value_or(1.0));
  }
  return d;
}

}  // namespace oblot
