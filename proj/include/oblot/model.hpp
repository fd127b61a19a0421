#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "oblot/geometry.hpp"

namespace oblot {

/// Engine-side handle. Never reaches a Snapshot.
using RobotId = std::size_t;

/// local = H * R(rotation) * (global - origin) / unit, H = diag(1, handedness)
struct LocalFrame {
  Point origin;
  double rotation = 0.0;
  int handedness = 1;
  double unit = 1.0;
};

Point to_local(const LocalFrame& f, Point global);
Point to_global(const LocalFrame& f, Point local);

struct CensusEntry {
  Point point;
  std::size_t count = 0;
};

/// Greedy eps-clustering in input order; members snap onto the first member.
std::vector<CensusEntry> cluster(const std::vector<Point>& points, double eps);

class Configuration {
 public:
  Configuration() = default;
  Configuration(std::vector<Point> positions, double eps);

  std::size_t size() const { return positions_.size(); }
  double eps() const { return eps_; }
  Point position(RobotId id) const;
  const std::vector<Point>& positions() const { return positions_; }

  /// Distinct occupied points, Q.
  const std::vector<Point>& q_points() const { return q_; }
  const std::vector<std::size_t>& counts() const { return counts_; }
  std::size_t point_of(RobotId id) const { return member_[id]; }
  bool multiplicity(std::size_t q_index) const { return counts_[q_index] > 1; }
  std::vector<CensusEntry> census() const;

  /// New configuration with one robot moved; snaps onto an occupied point within eps.
  Configuration moved(RobotId id, Point to) const;

 private:
  void rebuild();

  std::vector<Point> positions_;
  double eps_ = 1e-9;
  std::vector<Point> q_;
  std::vector<std::size_t> counts_;
  std::vector<std::size_t> member_;
};

struct Snapshot {
  std::vector<Point> points;  // local coordinates, lexicographic order
  std::optional<std::vector<bool>> multiplicity_bits;
  std::size_t self_index = 0;

  Point self() const { return points[self_index]; }
};

/// frame.origin is replaced by the robot's current position.
Snapshot take_snapshot(const Configuration& config, RobotId robot, LocalFrame frame, bool weak_detection);

struct MoveOutcome {
  Point start;
  Point intended;
  Point actual;
  bool truncated = false;
};

/// Throws ContractViolation unless stop lies in [min(delta, d), d].
std::pair<Configuration, MoveOutcome> apply_move(const Configuration& config, RobotId robot, Point intended_global,
                                                 double stop_distance, double delta);

struct DistinctCount {
  std::size_t distinct = 0;
  std::vector<CensusEntry> census;
};

DistinctCount count_distinct(const Configuration& config, Tolerance tol);

}  // namespace oblot
