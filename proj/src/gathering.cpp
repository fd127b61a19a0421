#include <algorithm>
#include <cmath>

#include "oblot/algorithms.hpp"
#include "oblot/errors.hpp"

namespace oblot {

namespace {

double extent(const Snapshot& snap) {
  double e = 0.0;
  for (Point p : snap.points) e = std::max(e, norm(p - snap.self()));
  return e;
}

/// Closest other point; ties go to the smaller (angle, distance) in the local frame.
std::optional<Point> closest_other(const Snapshot& snap, double eps) {
  const Point q = snap.self();
  std::optional<Point> best;
  for (std::size_t i = 0; i < snap.points.size(); ++i) {
    if (i == snap.self_index) continue;
    Point p = snap.points[i];
    if (!best) {
      best = p;
      continue;
    }
    double dp = distance(q, p), db = distance(q, *best);
    if (dp < db - eps || (dp <= db + eps && polar_angle(p - q) < polar_angle(*best - q))) best = p;
  }
  return best;
}

}  // namespace

Decision seq_gathering(const Snapshot& snap, Tolerance tol) {
  if (!snap.multiplicity_bits) throw CapabilityError("SeqGathering needs weak multiplicity detection");
  const auto& bits = *snap.multiplicity_bits;
  const Point q = snap.self();
  const double e = tol.eps * std::max(1.0, extent(snap));
  Decision d{q, Stage::Gathering, {}};

  std::vector<Point> multis;
  for (std::size_t i = 0; i < snap.points.size(); ++i)
    if (bits[i]) multis.push_back(snap.points[i]);
  const bool mine = bits[snap.self_index];

  if (multis.size() == 1) {
    if (mine || segment_blocked(q, multis.front(), snap.points, Tolerance{e})) return d;
    d.destination = multis.front();
  } else if (multis.size() > 1) {
    if (!mine) return d;
    auto c = closest_other(snap, e);
    Point z = (q + *c) / 2.0;
    auto occupied = [&](Point x) {
      return std::any_of(snap.points.begin(), snap.points.end(), [&](Point p) { return distance(p, x) <= e; });
    };
    while (occupied(z) && distance(q, z) > e) z = (q + z) / 2.0;
    if (distance(q, z) <= e) return d;
    d.destination = z;
  } else {
    auto c = closest_other(snap, e);
    if (!c) return d;
    d.destination = *c;
  }
  d.path = {d.destination};
  return d;
}

Decision go_to_center_sec(const Snapshot& snap, Tolerance tol) {
  Point c = smallest_enclosing_circle(snap.points, tol).center;
  Decision d{c, Stage::Gathering, {c}};
  if (distance(c, snap.self()) <= tol.eps * std::max(1.0, extent(snap))) d = {snap.self(), Stage::Gathering, {}};
  return d;
}

Decision rendezvous(const Snapshot& snap) {
  if (snap.points.size() != 2) return {snap.self(), Stage::Gathering, {}};
  Point other = snap.points[1 - snap.self_index];
  return {other, Stage::Gathering, {other}};
}

}  // namespace oblot
