#include "oblot/model.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "oblot/errors.hpp"

namespace oblot {

Point to_local(const LocalFrame& f, Point global) {
  Point v = rotate(global - f.origin, f.rotation) / f.unit;
  return {v.x, v.y * f.handedness};
}

Point to_global(const LocalFrame& f, Point local) {
  Point v{local.x, local.y * f.handedness};
  return f.origin + rotate(v, -f.rotation) * f.unit;
}

std::vector<CensusEntry> cluster(const std::vector<Point>& points, double eps) {
  std::vector<CensusEntry> out;
  for (Point p : points) {
    auto it = std::find_if(out.begin(), out.end(), [&](const CensusEntry& c) { return distance(c.point, p) <= eps; });
    if (it == out.end())
      out.push_back({p, 1});
    else
      ++it->count;
  }
  return out;
}

Configuration::Configuration(std::vector<Point> positions, double eps) : positions_(std::move(positions)), eps_(eps) {
  for (Point p : positions_)
    if (!finite(p)) throw UsageError("configuration: non-finite robot position");
  rebuild();
}

void Configuration::rebuild() {
  q_.clear();
  counts_.clear();
  member_.assign(positions_.size(), 0);
  for (std::size_t i = 0; i < positions_.size(); ++i) {
    std::size_t j = 0;
    while (j < q_.size() && distance(q_[j], positions_[i]) > eps_) ++j;
    if (j == q_.size()) {
      q_.push_back(positions_[i]);
      counts_.push_back(0);
    }
    positions_[i] = q_[j];
    ++counts_[j];
    member_[i] = j;
  }
}

Point Configuration::position(RobotId id) const {
  if (id >= positions_.size()) throw UsageError("unknown robot id " + std::to_string(id));
  return positions_[id];
}

std::vector<CensusEntry> Configuration::census() const {
  std::vector<CensusEntry> out;
  for (std::size_t i = 0; i < q_.size(); ++i) out.push_back({q_[i], counts_[i]});
  return out;
}

Configuration Configuration::moved(RobotId id, Point to) const {
  if (id >= positions_.size()) throw UsageError("unknown robot id " + std::to_string(id));
  Configuration c = *this;
  for (std::size_t i = 0; i < positions_.size(); ++i)
    if (i != id && distance(positions_[i], to) <= eps_) {
      to = positions_[i];
      break;
    }
  c.positions_[id] = to;
  c.rebuild();
  return c;
}

Snapshot take_snapshot(const Configuration& config, RobotId robot, LocalFrame frame, bool weak_detection) {
  frame.origin = config.position(robot);
  const auto& q = config.q_points();
  std::vector<std::size_t> idx(q.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::vector<Point> local;
  for (Point p : q) local.push_back(to_local(frame, p));
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return lex_less(local[a], local[b]); });

  Snapshot s;
  std::vector<bool> bits;
  for (std::size_t k = 0; k < idx.size(); ++k) {
    s.points.push_back(local[idx[k]]);
    bits.push_back(config.multiplicity(idx[k]));
    if (idx[k] == config.point_of(robot)) s.self_index = k;
  }
  s.points[s.self_index] = {0.0, 0.0};
  if (weak_detection) s.multiplicity_bits = std::move(bits);
  return s;
}

std::pair<Configuration, MoveOutcome> apply_move(const Configuration& config, RobotId robot, Point intended_global,
                                                 double stop_distance, double delta) {
  const Point start = config.position(robot);
  const double d = distance(start, intended_global);
  MoveOutcome out{start, intended_global, start, false};
  if (d == 0.0) return {config, out};
  const double lo = std::min(delta, d);
  const double slack = 1e-12 * std::max(1.0, d);
  if (!(stop_distance >= lo - slack && stop_distance <= d + slack))
    throw ContractViolation("movement adversary stopped robot " + std::to_string(robot) + " after " +
                            std::to_string(stop_distance) + ", legal interval is [" + std::to_string(lo) + ", " +
                            std::to_string(d) + "]");
  if (stop_distance >= d - slack) {
    out.actual = intended_global;
  } else {
    out.actual = start + (intended_global - start) * (stop_distance / d);
    out.truncated = true;
  }
  Configuration next = config.moved(robot, out.actual);
  out.actual = next.position(robot);
  return {std::move(next), out};
}

DistinctCount count_distinct(const Configuration& config, Tolerance tol) {
  DistinctCount out;
  out.census = cluster(config.positions(), tol.eps);
  out.distinct = out.census.size();
  return out;
}

}  // namespace oblot
