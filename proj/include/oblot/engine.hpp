#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "oblot/algorithms.hpp"
#include "oblot/model.hpp"
#include "oblot/schedulers.hpp"

namespace oblot {

struct Scenario {
  std::vector<Point> robots;
  std::vector<LocalFrame> frames;  // one per robot, origin ignored; empty means identity frames
  std::vector<Point> pattern;
  AlgorithmKind algorithm = AlgorithmKind::Auto;
  ActivationPolicy activation;
  MovementPolicy movement;
  bool weak_detection = false;
  double eps = 1e-9;
  std::size_t max_rounds = 0;  // 0 picks the default horizon
  std::uint64_t seed = 0;
};

/// Throws UsageError naming the violated assumption.
void validate(const Scenario& s);

/// Rotation uniform, handedness a fair coin, unit log-uniform in [lo, hi].
std::vector<LocalFrame> random_frames(std::size_t n, std::uint64_t seed, double lo = 0.1, double hi = 10.0);

struct RobotEvent {
  RobotId robot = 0;
  std::uint64_t snapshot_digest = 0;
  Point local_destination;
  Point intended;
  MoveOutcome outcome;
  Stage stage = Stage::None;
};

struct RoundEvent {
  std::size_t round = 0;
  std::vector<RobotId> active;
  std::vector<RobotEvent> robots;
  Stage stage = Stage::None;
  std::size_t q_count = 0;  // after the round
  bool epoch_end = false;
  std::vector<std::string> warnings;
};

struct Trace {
  std::vector<RoundEvent> events;
  std::vector<std::size_t> epoch_marks;
  std::vector<std::size_t> q_count_series;  // entry 0 is the initial configuration
  std::optional<std::size_t> formed_at;     // round after which the run was formed and quiescent
  std::vector<Point> final_positions;
  double rho = 0.0;       // SEC radius when the first non-initialization round starts
  double max_pair = 0.0;  // largest unique maximum pair distance seen (SeqPF')
  double delta = 0.0;
  std::size_t n = 0;
  std::size_t k = 0;
  AlgorithmKind algorithm = AlgorithmKind::Auto;
  std::string stop_reason;
};

std::uint64_t snapshot_digest(const Snapshot& s);

class Engine {
 public:
  explicit Engine(Scenario s);

  const Scenario& scenario() const { return scenario_; }
  const Configuration& config() const { return config_; }
  const Algorithm& algorithm() const { return algorithm_; }
  const Trace& trace() const { return trace_; }
  std::size_t round() const { return round_; }
  std::size_t epochs() const { return ledger().epochs; }
  const FairnessLedger& ledger() const { return activator_.ledger(); }
  std::size_t max_rounds() const { return max_rounds_; }
  Tolerance tolerance() const { return tol_; }

  /// Compute for one robot against the current configuration; nothing changes.
  Decision compute(RobotId r, Point* global_destination = nullptr) const;

  bool formed() const;
  /// Formed and every robot's Compute says stay.
  bool formed_and_quiescent() const;

  /// One round drawn from the activation and movement policies.
  const RoundEvent& step();
  /// One sequential round chosen by an outside adversary.
  const RoundEvent& step_manual(RobotId robot, double stop_fraction);

  /// Steps until formed and quiescent or the horizon.
  const Trace& run();

 private:
  const RoundEvent& execute(const std::vector<RobotId>& active, const std::vector<std::optional<double>>& fractions);
  void observe_start();

  Scenario scenario_;
  Tolerance tol_;
  Algorithm algorithm_;
  Configuration config_;
  Activator activator_;
  Mover mover_;
  std::size_t round_ = 0;
  std::size_t max_rounds_ = 0;
  Trace trace_;
  std::vector<std::optional<Point>> heading_;  // last unreached destination per robot
};

std::size_t default_max_rounds(std::size_t n, double rho, double delta);

struct BoundReport {
  std::string name;
  std::size_t n = 0;
  double rho = 0.0;
  double delta = 0.0;
  double max_pair = 0.0;
  double bound = 0.0;
  std::size_t observed = 0;
  bool pass = false;
  bool conclusive = true;
};

/// Epochs spent, counting a trailing partial epoch as one.
std::size_t epochs_used(const Trace& t, std::size_t first_round, std::size_t last_round);
std::vector<BoundReport> verify_bounds(const Trace& t);

struct DemoResult {
  std::string verdict;
  bool held = false;  // the impossibility held over the horizon (or the control gathered)
  std::size_t rounds = 0;
  std::size_t initial_q = 0;
  std::size_t min_q = 0;
  std::size_t max_q = 0;
  std::string action;  // Act1, Act2, Act3 for the mirror demo
  Trace trace;
};

/// FSYNC, rigid, identical frames; |Q(0)| < k with a multiplicity.
DemoResult demo_fsync_trap(AlgorithmKind kind, const std::vector<Point>& pattern, const std::vector<Point>& start,
                           std::size_t rounds, double eps = 1e-9);

enum class MirrorCandidate { Stay, GoToOther, GoToMidpoint, SeqGathering };
std::string to_string(MirrorCandidate c);
MirrorCandidate mirror_candidate_from(const std::string& s);

/// Two points, A a multiplicity, frames at A reflexive to frames at B.
DemoResult demo_mirror_gathering(MirrorCandidate candidate, bool grant_bits, std::size_t rounds, std::size_t n = 3,
                                 std::uint64_t seed = 1);

}  // namespace oblot
