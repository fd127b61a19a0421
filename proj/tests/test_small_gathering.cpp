#include <doctest.h>

#include <random>

#include "oblot/algorithms.hpp"
#include "oblot/engine.hpp"
#include "oblot/errors.hpp"
#include "oracles.hpp"

using namespace oblot;

namespace {

const Tolerance tol{1e-9};

Snapshot snap_of(std::vector<Point> pts, std::size_t self, bool weak = false) {
  Configuration c(pts, 1e-12);
  return take_snapshot(c, self, LocalFrame{}, weak);
}

Snapshot with_bits(std::vector<Point> pts, std::vector<bool> bits, std::size_t self) {
  Snapshot s;
  s.points = pts;
  s.multiplicity_bits = bits;
  s.self_index = self;
  return s;
}

bool close(Point a, Point b, double e = 1e-7) { return distance(a, b) <= e; }

}  // namespace

TEST_CASE("distance deviation") {
  CHECK(distance_deviation({{0, 0}}, {{0, 0}}) == 0.0);
  CHECK(distance_deviation({{0, 0}}, {{3, 4}}) == doctest::Approx(5));
  CHECK(distance_deviation({{0, 0}, {1, 0}}, {{0, 1}, {1, 1}}) == doctest::Approx(2));
  CHECK_THROWS_AS(distance_deviation({}, {}), UsageError);
  CHECK_THROWS_AS(distance_deviation({{0, 0}, {1, 0}, {2, 0}}, {{0, 0}, {1, 0}, {2, 0}}), UsageError);
}

TEST_CASE("seq_pf_small stages") {
  std::vector<Point> tri{{0, 0}, {1, 0}, {0.5, std::sqrt(3.0) / 2}};
  std::vector<Point> pattern{{0, 0}, {4, 0}, {1, 1}};

  SUBCASE("initialization") {
    Decision d = seq_pf_small(snap_of({{0, 0}, {0, 1}}, 0), pattern, tol);
    CHECK(d.stage == Stage::Initialization);
    CHECK(close(d.destination, {1, 0}));
  }
  SUBCASE("equilateral triangle vertex moves one unit outward") {
    auto s = snap_of(tri, 0);
    Decision d = seq_pf_small(s, pattern, tol);
    CHECK(d.stage == Stage::UniqueMaximum);
    CHECK(distance(d.destination, s.self()) == doctest::Approx(1.0));
    // away from the chosen farthest point, on the line through it
    bool away = false;
    for (std::size_t i = 0; i < s.points.size(); ++i)
      if (i != s.self_index) {
        Point u = (s.self() - s.points[i]) / distance(s.self(), s.points[i]);
        away |= close(d.destination, s.self() + u);
      }
    CHECK(away);
  }
  SUBCASE("equalization toward the closer endpoint") {
    std::vector<Point> q{{0, 0}, {10, 0}, {2, 1}, {7, -1}};
    Decision d = seq_pf_small(snap_of(q, 2), pattern, tol);
    CHECK(d.stage == Stage::Equalization);
    auto s = snap_of(q, 2);
    CHECK(close(d.destination, Point{0, 0} - Point{2, 1}));
    auto e = seq_pf_small(snap_of(q, 0), pattern, tol);
    CHECK(close(e.destination, {0, 0}));
  }
  SUBCASE("finalization moves the third robot to the best overlap") {
    std::vector<Point> q{{0, 0}, {4, 0}, {1.2, 0.6}};
    auto s = snap_of(q, 2);
    Decision d = seq_pf_small(s, pattern, tol);
    CHECK(d.stage == Stage::Finalization);
    // candidate third points over the 2 assignments x 2 reflections
    std::vector<Point> cands{{1, 1}, {1, -1}, {3, 1}, {3, -1}};
    Point best = cands[0];
    for (Point c : cands)
      if (distance(c, q[2]) < distance(best, q[2])) best = c;
    CHECK(close(d.destination + q[2], best));
    for (std::size_t i : {0, 1}) CHECK(close(seq_pf_small(snap_of(q, i), pattern, tol).destination, {0, 0}));
  }
  SUBCASE("formed pattern stays") {
    std::vector<Point> q{{0, 0}, {4, 0}, {3, -1}};
    CHECK(close(seq_pf_small(snap_of(q, 2), pattern, tol).destination, {0, 0}));
  }
}

TEST_CASE("seq_gathering") {
  SUBCASE("kappa 1 off the multiplicity") {
    Decision d = seq_gathering(with_bits({{0, 0}, {3, 1}, {-1, 2}}, {false, true, false}, 0), tol);
    CHECK(close(d.destination, {3, 1}));
    CHECK(close(seq_gathering(with_bits({{0, 0}, {3, 1}}, {true, false}, 0), tol).destination, {0, 0}));
  }
  SUBCASE("kappa 0 closest point") {
    Decision d = seq_gathering(with_bits({{0, 0}, {1, 0}, {3, 0}}, {false, false, false}, 0), tol);
    CHECK(close(d.destination, {1, 0}));
  }
  SUBCASE("kappa 2 halves toward the closest point") {
    Decision d = seq_gathering(with_bits({{0, 0}, {2, 0}, {5, 5}}, {true, false, true}, 0), tol);
    CHECK(close(d.destination, {1, 0}));
    Decision e = seq_gathering(with_bits({{0, 0}, {2, 0}, {1, 0}, {5, 5}}, {true, false, false, true}, 0), tol);
    CHECK(close(e.destination, {0.5, 0}));
    CHECK(close(seq_gathering(with_bits({{0, 0}, {2, 0}, {5, 5}}, {false, true, true}, 0), tol).destination, {0, 0}));
  }
  SUBCASE("needs bits") { CHECK_THROWS_AS(seq_gathering(snap_of({{0, 0}, {1, 0}}, 0), tol), CapabilityError); }
}

TEST_CASE("go to center of SEC and rendezvous") {
  CHECK(close(go_to_center_sec(snap_of({{0, 0}}, 0), tol).destination, {0, 0}));
  auto s = snap_of({{-1, 0}, {1, 0}}, 0);
  CHECK(close(go_to_center_sec(s, tol).destination, {1, 0}));
  std::mt19937_64 rng(3);
  for (int t = 0; t < 50; ++t) {
    auto pts = oracle::random_points(rng, 6, -5, 5);
    auto sn = snap_of(pts, 0);
    CHECK(close(go_to_center_sec(sn, tol).destination, smallest_enclosing_circle(sn.points, tol).center));
  }
  CHECK(close(rendezvous(snap_of({{0, 0}, {4, 0}}, 0)).destination, {4, 0}));
  CHECK(close(rendezvous(snap_of({{0, 0}}, 0)).destination, {0, 0}));
}

TEST_CASE("algorithm dispatch") {
  CHECK(resolve(AlgorithmKind::Auto, 1) == AlgorithmKind::SeqGathering);
  CHECK(resolve(AlgorithmKind::Auto, 3) == AlgorithmKind::SeqPFSmall);
  CHECK(resolve(AlgorithmKind::Auto, 7) == AlgorithmKind::SeqPF);
  CHECK(algorithm_kind_from("seq-pf") == AlgorithmKind::SeqPF);
  CHECK_THROWS_AS(algorithm_kind_from("nope"), UsageError);
  CHECK_THROWS_AS(Algorithm(AlgorithmKind::SeqPF, {{0, 0}, {1, 0}}, tol), UsageError);
  Algorithm a(AlgorithmKind::Auto, {{0, 0}}, tol);
  CHECK(a.needs_multiplicity());
}

TEST_CASE("seq_pf_small sidesteps a placed robot in its way") {
  std::vector<Point> pattern{{2, 0}, {-2, 0}, {0.3, 0.8}, {-0.3, -0.8}};
  std::vector<Point> q{{-2, 0}, {2, 0}, {0.3, 0.8}, {0.6, 1.6}};
  auto on_d = snap_of(q, 2);
  CHECK(close(seq_pf_small(on_d, pattern, tol).destination, on_d.self()));
  auto b = snap_of(q, 3);
  Decision d = seq_pf_small(b, pattern, tol);
  const Point open = Point{-0.3, -0.8} - q[3];
  CHECK(d.stage == Stage::Finalization);
  CHECK(segment_blocked(b.self(), open, b.points, tol));
  CHECK_FALSE(close(d.destination, b.self()));
  CHECK_FALSE(segment_blocked(b.self(), d.destination, b.points, tol));
  CHECK_FALSE(segment_blocked(d.destination, open, b.points, tol));

  Scenario s;
  s.robots = q;
  s.pattern = pattern;
  s.algorithm = AlgorithmKind::SeqPFSmall;
  s.movement = MovementPolicy{MovementKind::WorstCaseDelta, 0.1, 0, {}};
  Engine e(s);
  CHECK(e.run().formed_at.has_value());
}
