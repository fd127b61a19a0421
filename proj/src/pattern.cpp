#include "oblot/pattern.hpp"

#include <algorithm>
#include <numeric>

#include "oblot/errors.hpp"

namespace oblot {

namespace {

std::complex<double> cx(Point p) { return {p.x, p.y}; }
Point pt(std::complex<double> z) { return {z.real(), z.imag()}; }

}  // namespace

Point Similarity::apply(Point p) const {
  std::complex<double> z = cx(p);
  if (reflect) z = std::conj(z);
  return pt(scale * z + shift);
}

std::vector<Point> Similarity::apply(const std::vector<Point>& ps) const {
  std::vector<Point> out;
  out.reserve(ps.size());
  for (Point p : ps) out.push_back(apply(p));
  return out;
}

Similarity Similarity::through(Point a1, Point a2, Point b1, Point b2, bool reflect) {
  std::complex<double> z1 = cx(a1), z2 = cx(a2);
  if (reflect) {
    z1 = std::conj(z1);
    z2 = std::conj(z2);
  }
  if (z1 == z2) throw UsageError("Similarity::through: coincident source points");
  Similarity s;
  s.reflect = reflect;
  s.scale = (cx(b2) - cx(b1)) / (z2 - z1);
  s.shift = cx(b1) - s.scale * z1;
  return s;
}

int compare_sequences(const PatternSequence& a, const PatternSequence& b, double scale, Tolerance tol) {
  const double le = tol.eps * scale;
  std::size_t n = std::min(a.triples.size(), b.triples.size());
  for (std::size_t i = 0; i < n; ++i) {
    const PatternTriple& x = a.triples[i];
    const PatternTriple& y = b.triples[i];
    if (std::abs(x.angle - y.angle) > tol.eps) return x.angle < y.angle ? -1 : 1;
    if (std::abs(x.first - y.first) > le) return x.first < y.first ? -1 : 1;
    if (std::abs(x.second - y.second) > le) return x.second < y.second ? -1 : 1;
  }
  if (a.triples.size() != b.triples.size()) return a.triples.size() < b.triples.size() ? -1 : 1;
  return 0;
}

PatternSequenceSet pattern_sequences(const std::vector<Point>& pattern, Tolerance tol) {
  if (pattern.size() < 3) throw UsageError("pattern_sequences: needs at least three points");
  Circle sec = smallest_enclosing_circle(pattern, tol);
  const Point c = sec.center;
  const double scale = sec.radius > 0.0 ? sec.radius : 1.0;

  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < pattern.size(); ++i)
    if (distance(pattern[i], c) > tol.eps * scale) idx.push_back(i);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return polar_angle(pattern[a] - c) < polar_angle(pattern[b] - c);
  });

  std::vector<std::vector<std::size_t>> rays;
  for (std::size_t i : idx) {
    if (!rays.empty() && co_radial(pattern[rays.back().front()], pattern[i], c, tol))
      rays.back().push_back(i);
    else
      rays.push_back({i});
  }
  if (rays.size() > 1 && co_radial(pattern[rays.back().front()], pattern[rays.front().front()], c, tol)) {
    rays.front().insert(rays.front().end(), rays.back().begin(), rays.back().end());
    rays.pop_back();
  }
  for (auto& r : rays)
    std::stable_sort(r.begin(), r.end(), [&](std::size_t a, std::size_t b) {
      return distance(pattern[a], c) < distance(pattern[b], c);
    });

  PatternSequenceSet set;
  for (Chirality dir : {Chirality::Clockwise, Chirality::CounterClockwise}) {
    std::vector<std::size_t> cyc;
    if (dir == Chirality::CounterClockwise) {
      for (const auto& r : rays) cyc.insert(cyc.end(), r.begin(), r.end());
    } else {
      for (auto it = rays.rbegin(); it != rays.rend(); ++it) cyc.insert(cyc.end(), it->begin(), it->end());
    }
    const std::size_t m = cyc.size();
    for (std::size_t s = 0; s < m; ++s) {
      PatternSequence seq;
      seq.direction = dir;
      seq.start_index = cyc[s];
      for (std::size_t j = 0; j < m; ++j) {
        std::size_t a = cyc[(s + j) % m], b = cyc[(s + j + 1) % m];
        seq.order.push_back(a);
        double ang = co_radial(pattern[a], pattern[b], c, tol) ? 0.0 : sweep(c, pattern[a], pattern[b], dir);
        seq.triples.push_back({ang, distance(pattern[a], c), distance(pattern[b], c)});
      }
      set.all.push_back(std::move(seq));
    }
  }
  for (std::size_t i = 1; i < set.all.size(); ++i)
    if (compare_sequences(set.all[i], set.all[set.minimum], scale, tol) < 0) set.minimum = i;
  for (std::size_t i = 0; i < set.all.size(); ++i)
    if (compare_sequences(set.all[i], set.all[set.minimum], scale, tol) == 0) set.achieving.push_back(i);
  set.minimum = set.achieving.front();
  return set;
}

CircularDecomposition circular_decomposition(const std::vector<Point>& pattern, Tolerance tol) {
  if (pattern.empty()) throw UsageError("circular_decomposition: empty pattern");
  Circle sec = smallest_enclosing_circle(pattern, tol);
  const double le = tol.eps * (sec.radius > 0.0 ? sec.radius : 1.0);
  std::vector<std::size_t> idx(pattern.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return distance(pattern[a], sec.center) > distance(pattern[b], sec.center);
  });
  CircularDecomposition out;
  out.center = sec.center;
  out.membership.assign(pattern.size(), 0);
  for (std::size_t i : idx) {
    double d = distance(pattern[i], sec.center);
    if (out.circles.empty() || out.circles.back().radius - d > le) out.circles.push_back({sec.center, d});
    out.membership[i] = out.circles.size() - 1;
  }
  out.circles.front().radius = sec.radius;
  return out;
}

bool same_point_set(const std::vector<Point>& a, const std::vector<Point>& b, Tolerance tol) {
  if (a.size() != b.size()) return false;
  std::vector<bool> used(b.size(), false);
  for (Point p : a) {
    bool found = false;
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (!used[j] && distance(p, b[j]) <= tol.eps) {
        used[j] = found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

bool is_similar(const std::vector<Point>& q, const std::vector<Point>& pattern, Tolerance tol) {
  if (q.size() != pattern.size()) return false;
  if (q.size() <= 1) return true;
  Circle cq = smallest_enclosing_circle(q, tol);
  Circle cp = smallest_enclosing_circle(pattern, tol);
  if (cq.radius <= 0.0 || cp.radius <= 0.0) return cq.radius == cp.radius;
  std::vector<Point> qn, pn;
  for (Point p : q) qn.push_back((p - cq.center) / cq.radius);
  for (Point p : pattern) pn.push_back((p - cp.center) / cp.radius);
  const Circle unit{{0, 0}, 1.0};
  auto anchor = std::find_if(pn.begin(), pn.end(), [&](Point p) { return on_boundary(p, unit, tol); });
  if (anchor == pn.end()) return false;
  for (Point target : qn) {
    if (!on_boundary(target, unit, tol)) continue;
    for (bool refl : {false, true}) {
      Similarity s = Similarity::through({0, 0}, *anchor, {0, 0}, target, refl);
      if (same_point_set(s.apply(pn), qn, tol)) return true;
    }
  }
  return false;
}

PatternModel make_pattern_model(const std::vector<Point>& pattern, Tolerance tol) {
  Circle sec = smallest_enclosing_circle(pattern, tol);
  if (sec.radius <= 0.0) throw UsageError("pattern model: pattern has a single point");
  PatternModel m;
  for (Point p : pattern) m.points.push_back((p - sec.center) / sec.radius);
  m.sequences = pattern_sequences(m.points, tol);
  m.decomposition = circular_decomposition(m.points, tol);
  const PatternSequence& mu = m.sequences.mu_hat();
  m.order = mu.order;
  m.direction = mu.direction;
  const Circle unit{{0, 0}, 1.0};
  for (std::size_t i : m.order)
    if (on_boundary(m.points[i], unit, tol)) {
      m.first_boundary = i;
      break;
    }
  for (std::size_t i = 0; i < m.points.size(); ++i)
    if (norm(m.points[i]) <= tol.eps) m.center_index = i;
  return m;
}

}  // namespace oblot
