#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "oblot/geometry.hpp"
#include "oblot/model.hpp"

namespace oblot {

/// mt19937_64 plus fixed conversions, so streams match across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : gen_(seed) {}
  std::uint64_t next() { return gen_(); }
  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
  /// Uniform integer in [0, n).
  std::size_t below(std::size_t n);

 private:
  std::mt19937_64 gen_;
};

enum class ActivationKind { FSync, SSyncRandom, SeqRandom, SeqRoundRobin, Scripted, Interactive };
enum class MovementKind { Rigid, WorstCaseDelta, Random, Scripted, Interactive };

std::string to_string(ActivationKind k);
std::string to_string(MovementKind k);
ActivationKind activation_kind_from(const std::string& s);
MovementKind movement_kind_from(const std::string& s);
bool is_sequential(ActivationKind k);

struct ActivationPolicy {
  ActivationKind kind = ActivationKind::SeqRoundRobin;
  std::uint64_t seed = 0;
  std::vector<RobotId> script;
  std::size_t window = 0;  // 0 picks the kind's default
};

struct MovementPolicy {
  MovementKind kind = MovementKind::WorstCaseDelta;
  double delta = 0.05;
  std::uint64_t seed = 0;
  std::vector<double> script;  // stop fractions for the scripted kind
};

/// Default fairness window: n for round-robin, 2n for random kinds, 50n for scripted and interactive.
std::size_t default_window(ActivationKind k, std::size_t n);

/// Rounds are numbered from 1. last_activation 0 means never.
struct FairnessLedger {
  std::vector<std::size_t> last_activation;
  std::size_t window = 0;
  std::vector<bool> since_boundary;
  std::size_t epochs = 0;
  std::vector<std::size_t> epoch_marks;

  FairnessLedger() = default;
  FairnessLedger(std::size_t n, std::size_t window);

  /// Robots that must be activated soon so that none waits more than window rounds,
  /// earliest deadline first. Empty when the scheduler is free.
  std::vector<RobotId> starved(std::size_t round) const;
  /// Records an activation set; true when it closes an epoch.
  bool record(std::size_t round, const std::vector<RobotId>& active);
};

class Activator {
 public:
  Activator(ActivationPolicy policy, std::size_t n);

  /// Draws the activation set for this round and records it in the ledger.
  std::vector<RobotId> next(std::size_t round);

  std::optional<RobotId> forced(std::size_t round) const;
  const FairnessLedger& ledger() const { return ledger_; }
  FairnessLedger& ledger() { return ledger_; }
  const ActivationPolicy& policy() const { return policy_; }

 private:
  ActivationPolicy policy_;
  std::size_t n_;
  Rng rng_;
  std::size_t rr_next_ = 0;
  std::size_t script_pos_ = 0;
  FairnessLedger ledger_;
};

class Mover {
 public:
  explicit Mover(MovementPolicy policy) : policy_(std::move(policy)), rng_(policy_.seed ^ 0x9e3779b97f4a7c15ULL) {}

  /// Stop distance in [min(delta, d), d]. fraction is used by the interactive kind.
  double decide(Point start, Point intended, std::optional<double> fraction = std::nullopt);
  const MovementPolicy& policy() const { return policy_; }

 private:
  MovementPolicy policy_;
  Rng rng_;
  std::size_t script_pos_ = 0;
};

/// max(min(delta, d), f * d)
double clamp_stop(double d, double delta, double fraction);

}  // namespace oblot
