#include <algorithm>
#include <limits>

#include "oblot/algorithms.hpp"
#include "oblot/errors.hpp"

namespace oblot {

namespace {

const Circle kUnit{{0, 0}, 1.0};
const Point kO{0, 0};

bool near(Point a, Point b, Tolerance tol) { return distance(a, b) <= tol.eps; }

bool contains(const std::vector<Point>& pts, Point p, Tolerance tol) {
  return std::any_of(pts.begin(), pts.end(), [&](Point x) { return near(x, p, tol); });
}

double smallest_gap(const SPrime& sp) {
  const auto& e = sp.entries;
  if (e.size() < 2) return kTwoPi;
  double best = kTwoPi;
  for (std::size_t i = 0; i < e.size(); ++i)
    best = std::min(best, sweep(kO, e[i].point, e[(i + 1) % e.size()].point, Chirality::CounterClockwise));
  return best;
}

/// Angle from the anchor ray in the given sense; zero on the anchor ray itself.
double angle_from(Point anchor, Point p, Chirality cw, Tolerance tol) {
  if (co_radial(anchor, p, kO, tol)) return 0.0;
  return sweep(kO, anchor, p, cw);
}

}  // namespace

Normalized normalize(const Snapshot& snap, Tolerance tol) {
  Circle sec = smallest_enclosing_circle(snap.points, tol);
  Normalized n;
  n.center = sec.center;
  n.scale = sec.radius > 0.0 ? sec.radius : 1.0;
  for (Point p : snap.points) n.q.push_back((p - n.center) / n.scale);
  n.self = n.q[snap.self_index];
  return n;
}

Point separate(const Snapshot& snap, Tolerance tol) {
  double extent = 0.0;
  for (Point p : snap.points) extent = std::max(extent, norm(p - snap.self()));
  const double le = tol.eps * std::max(1.0, extent);
  const Point q = snap.self();
  std::optional<Point> closest;
  for (Point p : snap.points) {
    Point v = p - q;
    if (v.x > le && std::abs(v.y) <= le && (!closest || v.x < closest->x - q.x)) closest = p;
  }
  if (!closest || closest->x - q.x > 1.0 + le) return q + Point{1.0, 0.0};
  return q + Point{(closest->x - q.x) / 2.0, 0.0};
}

bool sec_responsible(const std::vector<Point>& q, Point p, Tolerance tol) {
  Circle sec = smallest_enclosing_circle(q, tol);
  if (!on_boundary(p, sec, tol)) return false;
  std::vector<Point> rest;
  for (Point x : q)
    if (!near(x, p, tol)) rest.push_back(x);
  if (rest.empty()) return true;
  return smallest_enclosing_circle(rest, tol).radius < sec.radius - tol.eps;
}

Similarity place_pattern(const PatternModel& m, Point anchor, Chirality dir) {
  return Similarity::through(kO, m.points[m.first_boundary], kO, anchor, m.direction != dir);
}

PatternRanking rank_pattern_points(const std::vector<Point>& placed, const CircularDecomposition& dec, Point anchor,
                                   Chirality cw, Tolerance tol) {
  const std::size_t k = placed.size();
  std::size_t p1 = k;
  for (std::size_t i = 0; i < k; ++i)
    if (near(placed[i], anchor, tol)) p1 = i;
  if (p1 == k) throw UsageError("rank_pattern_points: no pattern point on the anchor");

  PatternRanking r;
  auto push = [&](std::size_t i) {
    r.order.push_back(i);
    r.points.push_back(placed[i]);
    r.circle.push_back(dec.membership[i]);
  };
  push(p1);

  std::vector<std::size_t> cir1;
  for (std::size_t i = 0; i < k; ++i)
    if (i != p1 && dec.membership[i] == 0) cir1.push_back(i);
  const Point antipode = anchor * -1.0;
  auto by_angle = [&](std::size_t a, std::size_t b) {
    return angle_from(anchor, placed[a], cw, tol) < angle_from(anchor, placed[b], cw, tol);
  };
  auto take = [&](std::size_t i) {
    push(i);
    cir1.erase(std::find(cir1.begin(), cir1.end(), i));
  };
  auto at_antipode = std::find_if(cir1.begin(), cir1.end(), [&](std::size_t i) { return near(placed[i], antipode, tol); });
  if (at_antipode != cir1.end()) {
    take(*at_antipode);
  } else if (!cir1.empty()) {
    auto first_from_antipode = [&](Chirality dir) {
      return *std::min_element(cir1.begin(), cir1.end(), [&](std::size_t a, std::size_t b) {
        return sweep(kO, antipode, placed[a], dir) < sweep(kO, antipode, placed[b], dir);
      });
    };
    take(first_from_antipode(opposite(cw)));
    if (!cir1.empty()) take(first_from_antipode(cw));
  }
  std::stable_sort(cir1.begin(), cir1.end(), by_angle);
  for (std::size_t i : cir1) push(i);

  std::vector<std::size_t> inner;
  for (std::size_t i = 0; i < k; ++i)
    if (dec.membership[i] > 0) inner.push_back(i);
  std::stable_sort(inner.begin(), inner.end(), [&](std::size_t a, std::size_t b) {
    if (dec.membership[a] != dec.membership[b]) return dec.membership[a] < dec.membership[b];
    return by_angle(a, b);
  });
  for (std::size_t i : inner) push(i);
  return r;
}

PatternRanking rank_pattern_points(const JointConfiguration& g, const PatternModel& m, Tolerance tol) {
  return rank_pattern_points(g.pattern, m.decomposition, g.anchor, g.clockwise, tol);
}

std::optional<Point> last(const std::vector<Point>& q, Point self, const PatternModel& m, Tolerance tol) {
  const std::size_t k = m.points.size();
  if (q.size() < k) return std::nullopt;
  std::vector<Point> anchors;
  for (Point p : q)
    if (on_boundary(p, kUnit, tol)) anchors.push_back(p);
  const Chirality dirs[] = {Chirality::Clockwise, Chirality::CounterClockwise};

  if (q.size() == k)
    for (Point a : anchors)
      for (Chirality d : dirs)
        if (same_point_set(place_pattern(m, a, d).apply(m.points), q, tol)) return self;

  for (Point a : anchors)
    for (Chirality d : dirs) {
      std::vector<Point> placed = place_pattern(m, a, d).apply(m.points);
      Point pk = rank_pattern_points(placed, m.decomposition, a, d, tol).points.back();
      std::size_t missing = 0;
      bool only_pk = true;
      for (Point p : placed)
        if (!contains(q, p, tol)) {
          ++missing;
          only_pk &= near(p, pk, tol);
        }
      if (missing > 1 || !only_pk) continue;
      bool shape = true;
      for (Point r : q)
        if (!contains(placed, r, tol) && !segment_blocked(kO, pk, {r}, tol) && !near(r, kO, tol)) shape = false;
      if (!shape) continue;
      bool on_segment = near(self, kO, tol) || segment_blocked(kO, pk, {self}, tol);
      if (on_segment && !near(self, pk, tol)) return pk;
      return self;
    }
  return std::nullopt;
}

std::optional<JointConfiguration> overlap(const std::vector<Point>& q, const PatternModel& m, Tolerance tol) {
  auto lam = leader_angular_sequence(q, nullptr, kUnit, tol);
  if (!lam) return std::nullopt;
  JointConfiguration g;
  g.robots = q;
  g.anchor = lam->boundary_point;
  g.inner = lam->inner_point;
  g.clockwise = lam->orientation;
  g.placement = place_pattern(m, g.anchor, g.clockwise);
  g.pattern = g.placement.apply(m.points);
  g.leader = leader_angular_sequence(q, &g.pattern, kUnit, tol);
  if (g.leader && (!near(g.leader->boundary_point, g.anchor, tol) || g.leader->orientation != g.clockwise))
    g.leader.reset();
  return g;
}

namespace {

struct Canonical {
  Point anchor;
  Chirality dir;
};

/// Boundary robot and sense whose (gap, radius) sequence over S'(Q) is lexicographically least.
Canonical canonical_anchor(const std::vector<Point>& q, Tolerance tol) {
  SPrime sp = build_s_prime(q, nullptr, kUnit, tol);
  std::vector<Point> pts;
  for (const auto& e : sp.entries) pts.push_back(e.point);
  std::optional<Canonical> best;
  std::vector<double> best_key;
  for (Point a : pts) {
    if (!on_boundary(a, kUnit, tol)) continue;
    for (Chirality d : {Chirality::Clockwise, Chirality::CounterClockwise}) {
      std::vector<Point> order = pts;
      std::stable_sort(order.begin(), order.end(), [&](Point x, Point y) { return angle_from(a, x, d, tol) < angle_from(a, y, d, tol); });
      std::vector<double> key;
      for (std::size_t i = 0; i < order.size(); ++i) {
        Point nx = order[(i + 1) % order.size()];
        key.push_back(order.size() > 1 ? sweep(kO, order[i], nx, d) : kTwoPi);
        key.push_back(norm(nx));
      }
      bool better = !best;
      if (best)
        for (std::size_t i = 0; i < key.size(); ++i)
          if (std::abs(key[i] - best_key[i]) > tol.eps) {
            better = key[i] < best_key[i];
            break;
          }
      if (better) {
        best = Canonical{a, d};
        best_key = key;
      }
    }
  }
  if (!best) {
    // no robot in S' on the boundary cannot happen for a nondegenerate SEC; fall back to any boundary robot
    for (Point a : q)
      if (on_boundary(a, kUnit, tol)) return {a, Chirality::Clockwise};
    return {q.front(), Chirality::Clockwise};
  }
  return *best;
}

/// One robot inside the SEC and every off-pattern robot on the SEC holding it: the inner robot walks
/// straight to the first free pattern point of the canonical placement over the boundary robots.
std::optional<Point> lone_walker(const std::vector<Point>& q, Point self, const PatternModel& m, Tolerance tol) {
  std::vector<Point> inside, boundary;
  for (Point x : q) (on_boundary(x, kUnit, tol) ? boundary : inside).push_back(x);
  if (inside.size() != 1 || boundary.size() < 3 || norm(inside.front()) <= tol.eps) return std::nullopt;
  const Point w = inside.front();
  Canonical c = canonical_anchor(boundary, tol);
  std::vector<Point> placed = place_pattern(m, c.anchor, c.dir).apply(m.points);
  if (contains(placed, w, tol)) return std::nullopt;
  for (Point b : boundary)
    if (!contains(placed, b, tol) && !sec_responsible(q, b, tol)) return std::nullopt;
  PatternRanking r = rank_pattern_points(placed, m.decomposition, c.anchor, c.dir, tol);
  for (Point p : r.points) {
    if (contains(q, p, tol)) continue;
    if (segment_blocked(w, p, q, tol)) return std::nullopt;
    return near(self, w, tol) ? p : self;
  }
  return std::nullopt;
}

}  // namespace

Point leader(const std::vector<Point>& q, Point self, const std::optional<JointConfiguration>& gamma,
             const PatternModel* m, Tolerance tol) {
  const bool o_occupied = contains(q, kO, tol);
  if (!o_occupied) {
    if (sec_responsible(q, self, tol)) return self;
    if (segment_blocked(self, kO, q, tol)) return self;
    if (gamma && (near(self, gamma->inner, tol) || near(self, gamma->anchor, tol))) {
      bool coradial = std::any_of(q.begin(), q.end(), [&](Point x) { return !near(x, self, tol) && co_radial(x, self, kO, tol); });
      if (!coradial) return self;
    }
    return kO;
  }
  if (!near(self, kO, tol)) return self;

  Point anchor;
  Chirality dir;
  double xi;
  if (gamma) {
    anchor = gamma->anchor;
    dir = gamma->clockwise;
    xi = smallest_gap(build_s_prime(q, &gamma->pattern, kUnit, tol));
  } else {
    Canonical c = canonical_anchor(q, tol);
    anchor = c.anchor;
    dir = c.dir;
    if (m) {
      std::vector<Point> placed = place_pattern(*m, anchor, dir).apply(m->points);
      xi = smallest_gap(build_s_prime(q, &placed, kUnit, tol));
    } else {
      xi = smallest_gap(build_s_prime(q, nullptr, kUnit, tol));
    }
  }
  // u' -> q_j must turn in the leader's clockwise sense
  double a = polar_angle(anchor) + (dir == Chirality::CounterClockwise ? -xi / 3.0 : xi / 3.0);
  return polar(0.5, a);
}

std::optional<WalkerChoice> choose_walker(const JointConfiguration& g, const PatternRanking& r, Tolerance tol) {
  const auto& robots = g.robots;
  const auto& pattern = r.points;
  auto at_pattern = [&](Point x) { return contains(pattern, x, tol); };

  Point pl = pattern.back();
  for (Point p : pattern)
    if (!contains(robots, p, tol)) {
      pl = p;
      break;
    }

  const Point inner = g.leader ? g.leader->inner_point : g.inner;
  std::vector<Point> cands;
  for (Point x : robots)
    if (!at_pattern(x) && !near(x, kO, tol) && !near(x, g.anchor, tol) && !sec_responsible(robots, x, tol))
      cands.push_back(x);
  if (cands.size() > 1)
    cands.erase(std::remove_if(cands.begin(), cands.end(), [&](Point x) { return near(x, inner, tol); }), cands.end());
  auto priority = [&](Point a, Point b) {
    return higher_priority(radiangular_distance(g.anchor, a, kO, g.clockwise, tol),
                           radiangular_distance(g.anchor, b, kO, g.clockwise, tol), tol);
  };
  std::stable_sort(cands.begin(), cands.end(), priority);

  // walker headed for O through the first candidate's radius
  auto through_center = [&](const std::vector<Point>& pool, std::vector<Point> path) -> std::optional<WalkerChoice> {
    if (pool.empty()) return std::nullopt;
    for (Point u : pool)
      if (!segment_blocked(u, kO, robots, tol)) return WalkerChoice{u, pl, path};
    if (norm(pl) > tol.eps)
      for (Point u : pool)
        if (!segment_blocked(u, pl, robots, tol)) return WalkerChoice{u, pl, {pl}};
    Point u = pool.front();
    Point best = u;
    for (Point x : robots)
      if (!near(x, kO, tol) && co_radial(x, u, kO, tol) && norm(x) < norm(best)) best = x;
    return WalkerChoice{best, pl, path};
  };

  if (norm(pl) <= tol.eps) return through_center(cands, {kO});

  std::optional<Point> between, outer;
  bool outer_has_free = false;
  for (Point x : robots) {
    if (norm(x) <= tol.eps || !co_radial(x, pl, kO, tol) || near(x, pl, tol)) continue;
    if (norm(x) < norm(pl)) {
      if (!between || norm(x) > norm(*between)) between = x;
    } else {
      if (!outer || norm(x) < norm(*outer)) outer = x;
      if (std::find_if(cands.begin(), cands.end(), [&](Point c) { return near(c, x, tol); }) != cands.end())
        outer_has_free = true;
    }
  }
  if (between) return WalkerChoice{*between, pl, {pl}};
  // a center pattern point ranks last, so a robot already there leaves first
  if (contains(robots, kO, tol)) return WalkerChoice{kO, pl, {pl}};
  if (outer && outer_has_free) return WalkerChoice{*outer, pl, {pl}};

  std::vector<Point> off_ray;
  for (Point x : cands)
    if (!co_radial(x, pl, kO, tol)) off_ray.push_back(x);
  return through_center(off_ray, {kO, pl});
}

Decision occupy(const JointConfiguration& g, const PatternModel& m, Point self, Tolerance tol) {
  Decision d{self, Stage::PartialPatternFormation, {}};
  PatternRanking r = rank_pattern_points(g, m, tol);
  auto w = choose_walker(g, r, tol);
  if (!w || !near(w->walker, self, tol)) return d;
  d.destination = w->path.front();
  d.path = w->path;
  return d;
}

Decision seq_pf(const Snapshot& snap, const PatternModel& m, Tolerance tol) {
  const Point self = snap.self();
  if (snap.points.size() < m.points.size()) {
    Point z = separate(snap, tol);
    return {z, Stage::Initialization, {z}};
  }
  Normalized n = normalize(snap, tol);
  auto out = [&](Point dest_n, Stage s, const std::vector<Point>& path_n) {
    Decision d{self, s, {}};
    if (near(dest_n, n.self, tol)) return d;
    d.destination = n.to_local(dest_n);
    for (Point p : path_n) d.path.push_back(n.to_local(p));
    if (d.path.empty()) d.path.push_back(d.destination);
    return d;
  };
  if (auto z = last(n.q, n.self, m, tol)) return out(*z, Stage::Finalization, {});
  if (auto z = lone_walker(n.q, n.self, m, tol)) return out(*z, Stage::PartialPatternFormation, {});
  auto g = overlap(n.q, m, tol);
  if (!g) return out(leader(n.q, n.self, std::nullopt, &m, tol), Stage::LeaderConfiguration, {});
  if (g->leader) {
    Decision d = occupy(*g, m, n.self, tol);
    return out(d.destination, Stage::PartialPatternFormation, d.path);
  }
  return out(leader(n.q, n.self, g, &m, tol), Stage::LeaderConfiguration, {});
}

}  // namespace oblot
