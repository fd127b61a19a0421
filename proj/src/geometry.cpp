#include "oblot/geometry.hpp"

#include <algorithm>
#include <limits>

#include "oblot/errors.hpp"

namespace oblot {

double polar_angle(Point v) {
  double a = std::atan2(v.y, v.x);
  if (a < 0.0) a += kTwoPi;
  if (a >= kTwoPi) a -= kTwoPi;
  return a;
}

Point rotate(Point v, double a) {
  double c = std::cos(a), s = std::sin(a);
  return {c * v.x - s * v.y, s * v.x + c * v.y};
}

Point polar(double r, double a) { return {r * std::cos(a), r * std::sin(a)}; }

bool lex_less(Point a, Point b) { return a.x < b.x || (a.x == b.x && a.y < b.y); }

Chirality opposite(Chirality c) {
  return c == Chirality::Clockwise ? Chirality::CounterClockwise : Chirality::Clockwise;
}

double sweep(Point center, Point a, Point b, Chirality dir) {
  double d = polar_angle(b - center) - polar_angle(a - center);
  if (dir == Chirality::Clockwise) d = -d;
  while (d < 0.0) d += kTwoPi;
  while (d >= kTwoPi) d -= kTwoPi;
  return d;
}

namespace {

Circle diameter_circle(Point a, Point b) { return {(a + b) * 0.5, distance(a, b) * 0.5}; }

Circle circumcircle(Point a, Point b, Point c) {
  Point ab = b - a, ac = c - a;
  double d = 2.0 * cross(ab, ac);
  double scale = std::max({dot(ab, ab), dot(ac, ac), 1e-300});
  if (std::abs(d) <= 1e-14 * scale) {
    // collinear: the widest pair spans the circle
    Circle best = diameter_circle(a, b);
    for (Circle cand : {diameter_circle(a, c), diameter_circle(b, c)})
      if (cand.radius > best.radius) best = cand;
    return best;
  }
  double ab2 = dot(ab, ab), ac2 = dot(ac, ac);
  Point off{(ac.y * ab2 - ab.y * ac2) / d, (ab.x * ac2 - ac.x * ab2) / d};
  return {a + off, norm(off)};
}

}  // namespace

Circle smallest_enclosing_circle(const std::vector<Point>& points, Tolerance) {
  if (points.empty()) throw UsageError("smallest_enclosing_circle: empty point set");
  for (Point p : points)
    if (!finite(p)) throw UsageError("smallest_enclosing_circle: non-finite coordinate");

  double extent = 0.0;
  for (Point p : points) extent = std::max({extent, std::abs(p.x - points[0].x), std::abs(p.y - points[0].y)});
  const double slack = 1e-12 * extent;
  auto inside = [&](const Circle& c, Point p) { return distance(c.center, p) <= c.radius + slack; };

  Circle c{points[0], 0.0};
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (inside(c, points[i])) continue;
    c = {points[i], 0.0};
    for (std::size_t j = 0; j < i; ++j) {
      if (inside(c, points[j])) continue;
      c = diameter_circle(points[i], points[j]);
      for (std::size_t k = 0; k < j; ++k) {
        if (inside(c, points[k])) continue;
        c = circumcircle(points[i], points[j], points[k]);
      }
    }
  }
  double r = 0.0;
  for (Point p : points) r = std::max(r, distance(c.center, p));
  c.radius = r;
  return c;
}

bool on_boundary(Point p, const Circle& c, Tolerance tol) {
  return std::abs(distance(p, c.center) - c.radius) <= tol.eps;
}

bool strictly_inside(Point p, const Circle& c, Tolerance tol) {
  return distance(p, c.center) < c.radius - tol.eps;
}

bool co_radial(Point a, Point b, Point center, Tolerance tol) {
  Point u = a - center, v = b - center;
  if (norm(u) <= tol.eps || norm(v) <= tol.eps) return true;
  return std::abs(std::atan2(cross(u, v), dot(u, v))) <= tol.eps;
}

bool segment_blocked(Point a, Point b, const std::vector<Point>& obstacles, Tolerance tol) {
  Point ab = b - a;
  double len2 = dot(ab, ab);
  for (Point o : obstacles) {
    if (distance(o, a) <= tol.eps || distance(o, b) <= tol.eps) continue;
    double t = len2 > 0.0 ? std::clamp(dot(o - a, ab) / len2, 0.0, 1.0) : 0.0;
    if (distance(o, a + ab * t) <= tol.eps) return true;
  }
  return false;
}

SPrime build_s_prime(const std::vector<Point>& robots, const std::vector<Point>* pattern, const Circle& sec,
                     Tolerance tol) {
  struct Item {
    SPrimeEntry e;
    double angle;
  };
  std::vector<Item> items;
  auto add = [&](Point p, Source s) {
    if (distance(p, sec.center) <= tol.eps) return;
    items.push_back({{p, s}, polar_angle(p - sec.center)});
  };
  for (Point p : robots) add(p, Source::Robot);
  if (pattern)
    for (Point p : *pattern) add(p, Source::Pattern);
  std::stable_sort(items.begin(), items.end(), [](const Item& a, const Item& b) { return a.angle < b.angle; });

  std::vector<std::vector<Item>> groups;
  for (const Item& it : items) {
    if (!groups.empty() && co_radial(groups.back().front().e.point, it.e.point, sec.center, tol))
      groups.back().push_back(it);
    else
      groups.push_back({it});
  }
  if (groups.size() > 1 && co_radial(groups.back().front().e.point, groups.front().front().e.point, sec.center, tol)) {
    for (const Item& it : groups.back()) groups.front().push_back(it);
    groups.pop_back();
  }

  SPrime out;
  for (const auto& g : groups) {
    const Item* best = nullptr;
    for (const Item& it : g) {
      if (best == nullptr) {
        best = &it;
        continue;
      }
      bool it_robot = it.e.source == Source::Robot, best_robot = best->e.source == Source::Robot;
      if (it_robot != best_robot) {
        if (it_robot) best = &it;
        continue;
      }
      if (distance(it.e.point, sec.center) > distance(best->e.point, sec.center)) best = &it;
    }
    out.entries.push_back(best->e);
  }
  std::stable_sort(out.entries.begin(), out.entries.end(), [&](const SPrimeEntry& a, const SPrimeEntry& b) {
    return polar_angle(a.point - sec.center) < polar_angle(b.point - sec.center);
  });
  return out;
}

AngleSequence angle_sequence(const std::vector<Point>& s_prime, Point center, Point start, Chirality direction,
                             Tolerance tol) {
  if (s_prime.size() < 3) throw UsageError("angle_sequence: needs more than two points");
  std::vector<Point> pts = s_prime;
  std::sort(pts.begin(), pts.end(), [&](Point a, Point b) { return sweep(center, start, a, direction) < sweep(center, start, b, direction); });
  // a point co-radial with start but just behind it sorts last; rotate it to the front
  std::size_t s = pts.size();
  for (std::size_t i = 0; i < pts.size(); ++i)
    if (distance(pts[i], start) <= tol.eps) {
      s = i;
      break;
    }
  if (s == pts.size()) throw UsageError("angle_sequence: start is not in the sequence");
  std::rotate(pts.begin(), pts.begin() + static_cast<std::ptrdiff_t>(s), pts.end());

  AngleSequence seq;
  seq.direction = direction;
  seq.points = pts;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    Point a = pts[i], b = pts[(i + 1) % pts.size()];
    double ang = sweep(center, a, b, direction);
    if (co_radial(a, b, center, tol)) throw UsageError("angle_sequence: co-radial points");
    seq.angles.push_back(ang);
  }
  return seq;
}

std::optional<LeaderAngularSequence> leader_angular_sequence(const std::vector<Point>& robots,
                                                             const std::vector<Point>* pattern, Tolerance tol) {
  if (robots.empty()) return std::nullopt;
  return leader_angular_sequence(robots, pattern, smallest_enclosing_circle(robots, tol), tol);
}

std::optional<LeaderAngularSequence> leader_angular_sequence(const std::vector<Point>& robots,
                                                             const std::vector<Point>* pattern, const Circle& sec,
                                                             Tolerance tol) {
  SPrime sp = build_s_prime(robots, pattern, sec, tol);
  if (!sp.defined()) return std::nullopt;
  const auto& e = sp.entries;
  const std::size_t l = e.size();
  std::size_t best = 0;
  double best_gap = std::numeric_limits<double>::infinity(), second = best_gap;
  for (std::size_t i = 0; i < l; ++i) {
    double g = sweep(sec.center, e[i].point, e[(i + 1) % l].point, Chirality::CounterClockwise);
    if (g < best_gap) {
      second = best_gap;
      best_gap = g;
      best = i;
    } else if (g < second) {
      second = g;
    }
  }
  if (second - best_gap <= tol.eps) return std::nullopt;
  const SPrimeEntry& a = e[best];
  const SPrimeEntry& b = e[(best + 1) % l];
  if (a.source != Source::Robot || b.source != Source::Robot) return std::nullopt;

  LeaderAngularSequence lam;
  if (strictly_inside(a.point, sec, tol) && on_boundary(b.point, sec, tol)) {
    lam.inner_point = a.point;
    lam.boundary_point = b.point;
    lam.orientation = Chirality::CounterClockwise;
  } else if (strictly_inside(b.point, sec, tol) && on_boundary(a.point, sec, tol)) {
    lam.inner_point = b.point;
    lam.boundary_point = a.point;
    lam.orientation = Chirality::Clockwise;
  } else {
    return std::nullopt;
  }
  std::vector<Point> pts;
  for (const auto& x : e) pts.push_back(x.point);
  lam.base = angle_sequence(pts, sec.center, lam.inner_point, lam.orientation, tol);
  lam.theta1_index = 0;
  lam.theta1 = best_gap;
  return lam;
}

RadiangularDistance radiangular_distance(Point a, Point b, Point center, Chirality orientation, Tolerance tol) {
  if (co_radial(a, b, center, tol)) return {0.0, distance(a, b)};
  return {sweep(center, a, b, orientation), distance(center, a) + distance(center, b)};
}

bool higher_priority(const RadiangularDistance& a, const RadiangularDistance& b, Tolerance tol) {
  if (std::abs(a.angle - b.angle) > tol.eps) return a.angle < b.angle;
  if (a.angle <= tol.eps && b.angle <= tol.eps) return a.length < b.length - tol.eps;
  return a.length > b.length + tol.eps;
}

}  // namespace oblot
