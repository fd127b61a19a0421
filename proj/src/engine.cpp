#include "oblot/engine.hpp"

#include <algorithm>
#include <cmath>

#include "oblot/errors.hpp"
#include "oblot/hash.hpp"

namespace oblot {

namespace {

double sec_radius(const std::vector<Point>& pts) {
  if (pts.empty()) return 0.0;
  return smallest_enclosing_circle(pts, Tolerance{}).radius;
}

double scale_of(const std::vector<Point>& robots) {
  double r = sec_radius(robots);
  return r > 0.0 ? r : 1.0;
}

std::vector<LocalFrame> frames_or_identity(const Scenario& s) {
  if (!s.frames.empty()) return s.frames;
  return std::vector<LocalFrame>(s.robots.size());
}

Configuration initial_config(const Scenario& s) {
  validate(s);
  return Configuration(s.robots, s.eps * scale_of(s.robots));
}

/// Unique maximum pair distance of Q, if unique within eps relative to it.
std::optional<double> unique_max_pair(const std::vector<Point>& q, double eps) {
  double d = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i)
    for (std::size_t j = i + 1; j < q.size(); ++j) d = std::max(d, distance(q[i], q[j]));
  std::size_t count = 0;
  for (std::size_t i = 0; i < q.size(); ++i)
    for (std::size_t j = i + 1; j < q.size(); ++j)
      if (distance(q[i], q[j]) >= d - eps * d) ++count;
  if (count != 1) return std::nullopt;
  return d;
}

}  // namespace

void validate(const Scenario& s) {
  if (s.robots.empty()) throw UsageError("robots: at least one robot is required");
  if (s.pattern.empty()) throw UsageError("pattern: at least one pattern point is required");
  if (s.robots.size() < s.pattern.size())
    throw UsageError("robots: trivial assumption violated, " + std::to_string(s.robots.size()) + " robots cannot form " +
                     std::to_string(s.pattern.size()) + " pattern points (need at least as many robots as points)");
  for (Point p : s.robots)
    if (!finite(p)) throw UsageError("robots: non-finite coordinate");
  for (Point p : s.pattern)
    if (!finite(p)) throw UsageError("pattern: non-finite coordinate");
  if (!s.frames.empty() && s.frames.size() != s.robots.size())
    throw UsageError("frames: expected one frame per robot");
  for (const auto& f : s.frames) {
    if (!(f.unit > 0.0) || !std::isfinite(f.unit)) throw UsageError("frames: unit must be positive");
    if (f.handedness != 1 && f.handedness != -1) throw UsageError("frames: handedness must be 1 or -1");
    if (!std::isfinite(f.rotation)) throw UsageError("frames: rotation must be finite");
  }
  if (!(s.eps > 0.0)) throw UsageError("eps: must be positive");
  if (!(s.movement.delta > 4.0 * s.eps)) throw UsageError("movement.delta: must exceed 4 * eps");
  for (std::size_t i = 0; i < s.pattern.size(); ++i)
    for (std::size_t j = i + 1; j < s.pattern.size(); ++j)
      if (distance(s.pattern[i], s.pattern[j]) <= s.eps * scale_of(s.pattern))
        throw UsageError("pattern: points " + std::to_string(i) + " and " + std::to_string(j) + " coincide");
  AlgorithmKind k = resolve(s.algorithm, s.pattern.size());
  if (k == AlgorithmKind::SeqGathering && !s.weak_detection)
    throw CapabilityError("algorithm seq-gathering needs weak_detection");
}

std::vector<LocalFrame> random_frames(std::size_t n, std::uint64_t seed, double lo, double hi) {
  Rng rng(seed);
  std::vector<LocalFrame> out;
  for (std::size_t i = 0; i < n; ++i) {
    LocalFrame f;
    f.rotation = rng.uniform(0.0, kTwoPi);
    f.handedness = (rng.next() >> 63) ? -1 : 1;
    f.unit = std::exp(rng.uniform(std::log(lo), std::log(hi)));
    out.push_back(f);
  }
  return out;
}

std::uint64_t snapshot_digest(const Snapshot& s) {
  std::uint64_t h = kFnvOffset;
  for (Point p : s.points) h = fnv1a_double(p.y, fnv1a_double(p.x, h));
  std::uint64_t self = s.self_index;
  h = fnv1a(&self, sizeof self, h);
  if (s.multiplicity_bits)
    for (bool b : *s.multiplicity_bits) h = fnv1a(b ? "1" : "0", h);
  return h;
}

std::size_t default_max_rounds(std::size_t n, double rho, double delta) {
  double c = std::ceil(rho / delta);
  return static_cast<std::size_t>(10.0 * n * (2.0 * (n + 1) * c + 2.0));
}

Engine::Engine(Scenario s)
    : scenario_((validate(s), std::move(s))),
      tol_{scenario_.eps},
      algorithm_(scenario_.algorithm, scenario_.pattern, tol_),
      config_(initial_config(scenario_)),
      activator_(scenario_.activation, scenario_.robots.size()),
      mover_(scenario_.movement) {
  scenario_.frames = frames_or_identity(scenario_);
  const std::size_t n = scenario_.robots.size();
  max_rounds_ = scenario_.max_rounds ? scenario_.max_rounds
                                     : default_max_rounds(n, scale_of(scenario_.robots), scenario_.movement.delta);
  trace_.n = n;
  trace_.k = scenario_.pattern.size();
  trace_.delta = scenario_.movement.delta;
  trace_.algorithm = algorithm_.kind();
  trace_.q_count_series.push_back(config_.q_points().size());
  trace_.final_positions = config_.positions();
  heading_.assign(n, std::nullopt);
}

Decision Engine::compute(RobotId r, Point* global_destination) const {
  LocalFrame f = scenario_.frames.at(r);
  Snapshot snap = take_snapshot(config_, r, f, scenario_.weak_detection);
  Decision d = algorithm_.decide(snap);
  if (global_destination) {
    f.origin = config_.position(r);
    *global_destination = to_global(f, d.destination);
    if (distance(*global_destination, f.origin) <= config_.eps()) *global_destination = f.origin;
  }
  return d;
}

bool Engine::formed() const {
  const auto& q = config_.q_points();
  if (scenario_.pattern.size() == 1) return q.size() == 1;
  return q.size() == scenario_.pattern.size() && is_similar(q, scenario_.pattern, tol_);
}

bool Engine::formed_and_quiescent() const {
  if (!formed()) return false;
  for (RobotId r = 0; r < config_.size(); ++r) {
    Point g;
    compute(r, &g);
    if (g != config_.position(r)) return false;
  }
  return true;
}

void Engine::observe_start() {
  if (algorithm_.kind() != AlgorithmKind::SeqPFSmall) return;
  if (auto d = unique_max_pair(config_.q_points(), tol_.eps)) trace_.max_pair = std::max(trace_.max_pair, *d);
}

const RoundEvent& Engine::execute(const std::vector<RobotId>& active,
                                  const std::vector<std::optional<double>>& fractions) {
  observe_start();
  const Configuration start = config_;
  RoundEvent ev;
  ev.round = round_;
  ev.active = active;
  for (std::size_t i = 0; i < active.size(); ++i) {
    RobotId r = active[i];
    LocalFrame f = scenario_.frames.at(r);
    Snapshot snap = take_snapshot(start, r, f, scenario_.weak_detection);
    Decision d = algorithm_.decide(snap);
    f.origin = start.position(r);
    Point intended = to_global(f, d.destination);
    if (distance(intended, f.origin) <= start.eps()) intended = f.origin;
    RobotEvent re;
    re.robot = r;
    re.snapshot_digest = snapshot_digest(snap);
    re.local_destination = d.destination;
    re.intended = intended;
    re.stage = d.stage;
    const double dist = distance(f.origin, intended);
    const double stop = fractions[i] ? clamp_stop(dist, scenario_.movement.delta, *fractions[i])
                                     : mover_.decide(f.origin, intended);
    re.outcome = MoveOutcome{f.origin, intended, f.origin, false};
    if (dist > 0.0) {
      auto [next, out] = apply_move(config_, r, intended, stop, scenario_.movement.delta);
      config_ = std::move(next);
      re.outcome = out;
    }
    heading_[r] = re.outcome.truncated ? std::optional<Point>(intended) : std::nullopt;
    ev.robots.push_back(re);
  }
  ev.stage = ev.robots.empty() ? Stage::None : ev.robots.front().stage;
  if (ev.stage == Stage::LeaderConfiguration) {
    // flag two robots heading for the centre at once
    Circle sec = smallest_enclosing_circle(config_.q_points(), tol_);
    const double e = tol_.eps * std::max(1.0, sec.radius);
    std::vector<RobotId> inbound;
    for (RobotId r = 0; r < config_.size(); ++r) {
      Point p = config_.position(r);
      if (heading_[r] && distance(*heading_[r], sec.center) <= e && distance(p, sec.center) > e &&
          distance(p, sec.center) < sec.radius - e)
        inbound.push_back(r);
    }
    if (inbound.size() >= 2)
      ev.warnings.push_back("two robots moving to the centre at once: " + std::to_string(inbound[0]) + ", " +
                            std::to_string(inbound[1]));
  }
  if (trace_.rho == 0.0 && ev.stage != Stage::Initialization) trace_.rho = sec_radius(start.q_points());
  ev.q_count = config_.q_points().size();
  const auto& marks = activator_.ledger().epoch_marks;
  ev.epoch_end = !marks.empty() && marks.back() == round_;
  trace_.epoch_marks = marks;
  trace_.q_count_series.push_back(ev.q_count);
  trace_.final_positions = config_.positions();
  trace_.events.push_back(std::move(ev));
  return trace_.events.back();
}

const RoundEvent& Engine::step() {
  ++round_;
  auto active = activator_.next(round_);
  return execute(active, std::vector<std::optional<double>>(active.size()));
}

const RoundEvent& Engine::step_manual(RobotId robot, double stop_fraction) {
  if (robot >= config_.size()) throw UsageError("unknown robot id " + std::to_string(robot));
  if (!(stop_fraction >= 0.0 && stop_fraction <= 1.0)) throw UsageError("stop_fraction must lie in [0, 1]");
  auto& ledger = activator_.ledger();
  auto urgent = ledger.starved(round_ + 1);
  if (!urgent.empty()) {
    bool tight = ledger.last_activation[urgent.front()] + ledger.window <= round_ + 1;
    bool ok = tight ? urgent.front() == robot : std::find(urgent.begin(), urgent.end(), robot) != urgent.end();
    if (!ok) throw ContractViolation("fairness forces robot " + std::to_string(urgent.front()));
  }
  ++round_;
  ledger.record(round_, {robot});
  const RoundEvent& ev = execute({robot}, {stop_fraction});
  if (formed_and_quiescent()) {
    trace_.formed_at = round_;
    trace_.stop_reason = "formed";
  }
  return ev;
}

const Trace& Engine::run() {
  while (true) {
    if (formed_and_quiescent()) {
      trace_.formed_at = round_;
      trace_.stop_reason = "formed";
      break;
    }
    if (round_ >= max_rounds_) {
      trace_.stop_reason = "max_rounds";
      break;
    }
    step();
  }
  return trace_;
}

}  // namespace oblot
