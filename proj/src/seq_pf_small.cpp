#include <algorithm>
#include <limits>

#include "oblot/algorithms.hpp"
#include "oblot/errors.hpp"

namespace oblot {

namespace {

struct MaxPairs {
  double d = 0.0;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
};

MaxPairs max_pairs(const std::vector<Point>& pts, double eps) {
  MaxPairs m;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) m.d = std::max(m.d, distance(pts[i], pts[j]));
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      if (distance(pts[i], pts[j]) >= m.d - eps) m.pairs.push_back({i, j});
  return m;
}

bool lex_less_list(std::vector<Point> a, std::vector<Point> b, double eps) {
  auto key = [](Point x, Point y) { return lex_less(x, y); };
  std::sort(a.begin(), a.end(), key);
  std::sort(b.begin(), b.end(), key);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::abs(a[i].x - b[i].x) > eps) return a[i].x < b[i].x;
    if (std::abs(a[i].y - b[i].y) > eps) return a[i].y < b[i].y;
  }
  return false;
}

}  // namespace

double distance_deviation(const std::vector<Point>& q, const std::vector<Point>& p) {
  if (q.size() != p.size() || q.empty() || q.size() > 2)
    throw UsageError("distance_deviation: needs one or two points on each side");
  if (q.size() == 1) return distance(p[0], q[0]);
  return std::min(distance(p[0], q[0]) + distance(p[1], q[1]), distance(p[1], q[0]) + distance(p[0], q[1]));
}

Decision seq_pf_small(const Snapshot& snap, const std::vector<Point>& pattern, Tolerance tol) {
  const std::size_t k = pattern.size();
  if (k < 2 || k > 4) throw UsageError("SeqPF' handles patterns of 2 to 4 points");
  const Point self = snap.self();
  Decision stay{self, Stage::None, {}};
  auto go = [&](Point z, Stage s) {
    Decision d{z, s, {z}};
    return d;
  };
  if (snap.points.size() < k) return go(separate(snap, tol), Stage::Initialization);

  MaxPairs qm = max_pairs(snap.points, 0.0);
  const double scale = qm.d;
  const double e = tol.eps * scale;
  qm = max_pairs(snap.points, e);
  const std::size_t me = snap.self_index;
  auto near = [&](Point a, Point b) { return distance(a, b) <= e; };
  auto blocked = [&](Point a, Point b) { return segment_blocked(a, b, snap.points, Tolerance{e}); };
  auto endpoint = [&](std::size_t i) {
    return std::any_of(qm.pairs.begin(), qm.pairs.end(), [&](auto pr) { return pr.first == i || pr.second == i; });
  };

  // overlay with the smallest distance deviation over every max pair of Q and of the pattern
  auto best_overlay = [&]() {
    const double pd = max_pairs(pattern, 0.0).d;
    MaxPairs pm = max_pairs(pattern, tol.eps * pd);
    std::vector<Point> best;
    double best_dev = std::numeric_limits<double>::infinity();
    for (auto [i1, i2] : qm.pairs) {
      std::vector<Point> q_rest;
      for (std::size_t i = 0; i < snap.points.size(); ++i)
        if (i != i1 && i != i2) q_rest.push_back(snap.points[i]);
      for (auto [a, b] : pm.pairs)
        for (int swap = 0; swap < 2; ++swap)
          for (bool reflect : {false, true}) {
            std::size_t x = swap ? b : a, y = swap ? a : b;
            auto placed = Similarity::through(pattern[x], pattern[y], snap.points[i1], snap.points[i2], reflect).apply(pattern);
            std::vector<Point> rest;
            for (std::size_t i = 0; i < k; ++i)
              if (i != x && i != y) rest.push_back(placed[i]);
            double dev = distance_deviation(q_rest, rest);
            bool better = best.empty() || dev < best_dev - e || (dev <= best_dev + e && lex_less_list(placed, best, e));
            if (better) {
              best = placed;
              best_dev = dev;
            }
          }
    }
    return best;
  };
  auto on = [&](const std::vector<Point>& placed, Point r) {
    return std::any_of(placed.begin(), placed.end(), [&](Point p) { return near(p, r); });
  };

  auto finalize = [&](const std::vector<Point>& placed) {
    Decision st{self, Stage::Finalization, {}};
    if (on(placed, self)) return st;
    std::vector<Point> loose;
    for (Point r : snap.points)
      if (!on(placed, r)) loose.push_back(r);
    // greedy nearest matching of loose robots to free pattern points, over reachable pairs only
    std::vector<Point> open;
    for (Point p : placed)
      if (std::none_of(snap.points.begin(), snap.points.end(), [&](Point r) { return near(p, r); })) open.push_back(p);
    auto reachable = [&](Point r, Point p) {
      return std::all_of(snap.points.begin(), snap.points.end(), [&](Point x) { return near(x, r) || distance(x, p) <= scale + e; });
    };
    struct Pair {
      double d;
      Point r, p;
    };
    std::vector<Pair> pairs;
    for (Point r : loose)
      for (Point p : open)
        if (reachable(r, p)) pairs.push_back({distance(r, p), r, p});
    std::sort(pairs.begin(), pairs.end(), [&](const Pair& a, const Pair& b) {
      if (std::abs(a.d - b.d) > e) return a.d < b.d;
      if (!near(a.r, b.r)) return lex_less(a.r, b.r);
      return lex_less(a.p, b.p);
    });
    std::vector<Point> used_r, used_p;
    std::optional<Point> target;
    for (const auto& pr : pairs) {
      auto taken = [&](const std::vector<Point>& v, Point x) { return std::any_of(v.begin(), v.end(), [&](Point y) { return near(x, y); }); };
      if (taken(used_r, pr.r) || taken(used_p, pr.p)) continue;
      used_r.push_back(pr.r);
      used_p.push_back(pr.p);
      if (near(pr.r, self)) target = pr.p;
    }
    if (!target) return st;
    if (!blocked(self, *target)) return go(*target, Stage::Finalization);
    // sidestep off the blocked line, keeping clear of every other position and inside the maximum distance
    const Point d = *target - self;
    const Point side{-d.y / distance(self, *target), d.x / distance(self, *target)};
    for (double h = 0.5; h > 1e-3; h /= 2) {
      std::optional<Point> pick;
      double pick_clear = 0.0;
      for (double sgn : {1.0, -1.0}) {
        Point w = self + d * 0.5 + side * (sgn * h * distance(self, *target));
        if (blocked(self, w) || blocked(w, *target)) continue;
        bool ok = true;
        double clear = std::numeric_limits<double>::infinity();
        for (Point x : snap.points) {
          if (near(x, self)) continue;
          ok = ok && distance(x, w) < scale - e;
          clear = std::min(clear, distance(x, w));
        }
        if (ok && (!pick || clear > pick_clear + e)) {
          pick = w;
          pick_clear = clear;
        }
      }
      if (pick) return go(*pick, Stage::Finalization);
    }
    return st;
  };

  if (qm.pairs.size() != 1) {
    // tied maxima the pattern itself has: finish around them when every tied robot is already placed
    if (snap.points.size() == k && k > 2) {
      if (is_similar(snap.points, pattern, tol)) return Decision{self, Stage::Finalization, {}};
      auto placed = best_overlay();
      bool settled = true;
      for (std::size_t i = 0; i < snap.points.size(); ++i)
        if (endpoint(i) && !on(placed, snap.points[i])) settled = false;
      if (settled) return finalize(placed);
    }
    stay.stage = Stage::UniqueMaximum;
    if (!endpoint(me)) return stay;
    std::optional<Point> far;
    for (Point p : snap.points) {
      if (distance(p, self) < scale - e) continue;
      if (!far || lex_less(p, *far)) far = p;
    }
    Point dir = (self - *far) / distance(self, *far);
    return go(self + dir, Stage::UniqueMaximum);
  }

  const auto [i1, i2] = qm.pairs.front();
  const Point q1 = snap.points[i1], q2 = snap.points[i2];

  if (snap.points.size() > k) {
    stay.stage = Stage::Equalization;
    if (me == i1 || me == i2) return stay;
    Point target = distance(self, q1) <= distance(self, q2) ? q1 : q2;
    if (blocked(self, target)) return stay;
    return go(target, Stage::Equalization);
  }

  stay.stage = Stage::Finalization;
  if (me == i1 || me == i2 || k == 2) return stay;
  if (is_similar(snap.points, pattern, tol)) return stay;
  return finalize(best_overlay());
}

}  // namespace oblot
