#include <algorithm>
#include <cmath>
#include <limits>

#include "oblot/engine.hpp"
#include "oblot/errors.hpp"
#include "oblot/hash.hpp"

namespace oblot {

DemoResult demo_fsync_trap(AlgorithmKind kind, const std::vector<Point>& pattern, const std::vector<Point>& start,
                           std::size_t rounds, double eps) {
  if (start.empty()) throw UsageError("fsync trap: no robots");
  double rho = smallest_enclosing_circle(start, Tolerance{}).radius;
  if (rho <= 0.0) rho = 1.0;
  Configuration c0(start, eps * rho);
  const std::size_t q0 = c0.q_points().size();
  if (q0 >= pattern.size())
    throw UsageError("fsync trap: needs fewer distinct starting points (" + std::to_string(q0) + ") than pattern points (" +
                     std::to_string(pattern.size()) + ")");
  if (std::none_of(c0.counts().begin(), c0.counts().end(), [](std::size_t c) { return c > 1; }))
    throw UsageError("fsync trap: the start needs a multiplicity");

  Scenario s;
  s.robots = start;
  s.frames.assign(start.size(), LocalFrame{{}, 0.7, 1, rho});
  s.pattern = pattern;
  s.algorithm = kind;
  s.activation.kind = ActivationKind::FSync;
  s.movement = MovementPolicy{MovementKind::Rigid, rho / 20.0, 0, {}};
  s.eps = eps;
  s.max_rounds = rounds;
  Engine e(s);

  DemoResult out;
  out.initial_q = out.min_q = out.max_q = q0;
  out.held = true;
  for (std::size_t r = 0; r < rounds; ++r) {
    std::size_t q = e.step().q_count;
    out.min_q = std::min(out.min_q, q);
    out.max_q = std::max(out.max_q, q);
    if (q > q0 || e.formed()) {
      out.held = false;
      break;
    }
  }
  out.rounds = e.round();
  out.trace = e.trace();
  out.verdict = out.held ? "trap-confirmed" : "trap-broken";
  return out;
}

std::string to_string(MirrorCandidate c) {
  switch (c) {
    case MirrorCandidate::Stay: return "stay";
    case MirrorCandidate::GoToOther: return "go-to-other";
    case MirrorCandidate::GoToMidpoint: return "go-to-midpoint";
    case MirrorCandidate::SeqGathering: return "seq-gathering";
  }
  return "?";
}

MirrorCandidate mirror_candidate_from(const std::string& s) {
  for (auto c : {MirrorCandidate::Stay, MirrorCandidate::GoToOther, MirrorCandidate::GoToMidpoint,
                 MirrorCandidate::SeqGathering})
    if (to_string(c) == s) return c;
  throw UsageError("unknown candidate '" + s + "'");
}

namespace {

Point closest_other(const Snapshot& s) {
  Point best = s.self();
  double bd = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < s.points.size(); ++i) {
    if (i == s.self_index) continue;
    double d = norm(s.points[i]);
    if (d < bd) bd = d, best = s.points[i];
  }
  return best;
}

Point naive(MirrorCandidate c, const Snapshot& s) {
  switch (c) {
    case MirrorCandidate::Stay: return s.self();
    case MirrorCandidate::GoToOther: return closest_other(s);
    case MirrorCandidate::GoToMidpoint: return closest_other(s) / 2.0;
    case MirrorCandidate::SeqGathering: break;
  }
  throw UsageError("not a naive candidate");
}

/// Frames by position: with two points the two sides see identical snapshots.
LocalFrame mirror_frame(const Configuration& c, RobotId r, const std::vector<LocalFrame>& fallback) {
  const auto& q = c.q_points();
  if (q.size() != 2) return fallback[r];
  std::size_t me = c.point_of(r);
  Point other = q[1 - me];
  Point self = q[me];
  LocalFrame f;
  f.origin = self;
  f.rotation = -polar_angle(other - self);
  // the first point gets the right-handed frame, the other its reflection
  f.handedness = me == 0 ? 1 : -1;
  f.unit = 1.0;
  return f;
}

/// Similarity-normalized copy: SEC center at the origin, radius 1.
Configuration renormalize(const Configuration& c) {
  Circle sec = smallest_enclosing_circle(c.q_points(), Tolerance{});
  if (sec.radius <= 0.0) return c;
  std::vector<Point> pos;
  for (Point p : c.positions()) pos.push_back((p - sec.center) / sec.radius);
  return Configuration(pos, c.eps());
}

double min_gap(const std::vector<Point>& q) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < q.size(); ++i)
    for (std::size_t j = i + 1; j < q.size(); ++j) best = std::min(best, distance(q[i], q[j]));
  return best;
}

}  // namespace

DemoResult demo_mirror_gathering(MirrorCandidate candidate, bool grant_bits, std::size_t rounds, std::size_t n,
                                 std::uint64_t seed) {
  if (n < 3) throw UsageError("mirror gathering needs at least 3 robots");
  std::vector<Point> start(n - 1, Point{-1, 0});
  start.push_back({1, 0});
  DemoResult out;

  if (candidate == MirrorCandidate::SeqGathering) {
    if (!grant_bits) throw CapabilityError("seq-gathering reads multiplicity bits; pass --grant-bits");
    Scenario s;
    s.robots = start;
    s.frames.assign(n, LocalFrame{{}, 0.0, 1, 1.0});
    s.frames.back() = LocalFrame{{}, kPi, -1, 1.0};
    s.pattern = {{0, 0}};
    s.algorithm = AlgorithmKind::SeqGathering;
    s.weak_detection = true;
    s.activation = ActivationPolicy{ActivationKind::SeqRandom, seed, {}, 0};
    s.movement = MovementPolicy{MovementKind::WorstCaseDelta, 0.1, seed, {}};
    s.max_rounds = rounds;
    Engine e(s);
    e.run();
    out.trace = e.trace();
    out.rounds = e.round();
    out.initial_q = 2;
    out.min_q = out.max_q = 2;
    for (std::size_t q : out.trace.q_count_series) out.min_q = std::min(out.min_q, q), out.max_q = std::max(out.max_q, q);
    out.held = out.trace.formed_at.has_value();
    out.action = "control";
    out.verdict = out.held ? "gathered at round " + std::to_string(*out.trace.formed_at) + " (control with multiplicity bits)"
                           : "control run did not gather";
    return out;
  }

  const double eps = 1e-9;
  Configuration c(start, eps);
  const auto fallback = random_frames(n, seed);
  auto decide = [&](const Configuration& cfg, RobotId r) {
    LocalFrame f = mirror_frame(cfg, r, fallback);
    Snapshot s = take_snapshot(cfg, r, f, false);
    Point local = naive(candidate, s);
    f.origin = cfg.position(r);
    Point g = to_global(f, local);
    return std::make_pair(g, s);
  };

  {
    Point here = c.position(0), there = c.position(n - 1);
    Point g = decide(c, 0).first;
    if (distance(g, here) <= 1e-9)
      out.action = "Act1";
    else if (distance(g, there) <= 1e-9)
      out.action = "Act2";
    else
      out.action = "Act3";
  }

  Trace& tr = out.trace;
  tr.n = n;
  tr.k = 1;
  tr.q_count_series.push_back(c.q_points().size());
  out.initial_q = out.min_q = out.max_q = c.q_points().size();
  FairnessLedger ledger(n, 2 * n);
  std::vector<RobotId> queue;
  std::size_t rr = 0;

  for (std::size_t round = 1; round <= rounds; ++round) {
    RobotId pick = 0;
    if (out.action == "Act1") {
      pick = rr++ % n;
    } else if (out.action == "Act2") {
      if (queue.empty()) {
        const auto& counts = c.counts();
        std::size_t a_point = counts[0] >= counts[1] ? 0 : 1;
        std::vector<RobotId> at_a, at_b;
        for (RobotId r = 0; r < n; ++r) (c.point_of(r) == a_point ? at_a : at_b).push_back(r);
        queue.assign(at_a.begin() + 1, at_a.end());
        queue.insert(queue.end(), at_b.begin(), at_b.end());
        queue.push_back(at_a.front());
        std::reverse(queue.begin(), queue.end());
      }
      pick = queue.back();
      queue.pop_back();
    } else {
      auto urgent = ledger.starved(round);
      if (!urgent.empty()) {
        pick = urgent.front();
      } else {
        double best = -1.0;
        for (RobotId r = 0; r < n; ++r) {
          Configuration next = c.moved(r, decide(c, r).first);
          const auto& q = next.q_points();
          double score = q.size() < 2 ? -0.5 : min_gap(q) / std::max(1e-300, smallest_enclosing_circle(q, Tolerance{}).radius);
          if (score > best) best = score, pick = r;
        }
      }
    }
    ledger.record(round, {pick});
    auto [g, snap] = decide(c, pick);
    RoundEvent ev;
    ev.round = round;
    ev.active = {pick};
    RobotEvent re;
    re.robot = pick;
    re.snapshot_digest = snapshot_digest(snap);
    re.intended = g;
    re.outcome = MoveOutcome{c.position(pick), g, g, false};
    c = renormalize(c.moved(pick, g));
    re.outcome.actual = c.position(pick);
    ev.robots.push_back(re);
    ev.q_count = c.q_points().size();
    ev.epoch_end = !ledger.epoch_marks.empty() && ledger.epoch_marks.back() == round;
    tr.events.push_back(ev);
    tr.q_count_series.push_back(ev.q_count);
    out.min_q = std::min(out.min_q, ev.q_count);
    out.max_q = std::max(out.max_q, ev.q_count);
    out.rounds = round;
    if (ev.q_count < 2) break;
  }
  tr.epoch_marks = ledger.epoch_marks;
  tr.final_positions = c.positions();
  out.held = out.min_q >= 2;
  out.verdict = out.held ? "not-gathered after " + std::to_string(out.rounds) +
                               " rounds (" + out.action + "; finite horizon, not a proof)"
                         : "gathered at round " + std::to_string(out.rounds) + " (" + out.action + ")";
  return out;
}

}  // namespace oblot
