#include <doctest.h>

#include <map>
#include <random>

#include "oblot/errors.hpp"
#include "oblot/model.hpp"
#include "oblot/schedulers.hpp"

using namespace oblot;

namespace {
bool close(Point a, Point b, double e = 1e-9) { return distance(a, b) <= e; }
}  // namespace

TEST_CASE("frames round trip and preserve similarity") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-5, 5), a(0, kTwoPi), s(0.1, 10);
  for (int t = 0; t < 200; ++t) {
    LocalFrame f{{u(rng), u(rng)}, a(rng), t % 2 ? 1 : -1, s(rng)};
    Point g{u(rng), u(rng)}, h{u(rng), u(rng)};
    CHECK(close(to_global(f, to_local(f, g)), g, 1e-9));
    CHECK(distance(to_local(f, g), to_local(f, h)) == doctest::Approx(distance(g, h) / f.unit));
  }
  LocalFrame mirror{{0, 0}, 0.0, -1, 1.0};
  CHECK(close(to_local(mirror, {1, 2}), {1, -2}));
  LocalFrame quarter{{0, 0}, kPi / 2, 1, 2.0};
  CHECK(close(to_local(quarter, {0, 2}), {-1, 0}));
}

TEST_CASE("configuration clusters co-located robots") {
  Configuration c({{0, 0}, {1, 0}, {1e-12, 0}, {1, 0}, {2, 2}}, 1e-9);
  CHECK(c.q_points().size() == 3);
  CHECK(c.counts() == std::vector<std::size_t>{2, 2, 1});
  CHECK(c.position(2) == Point{0, 0});
  CHECK(c.multiplicity(0));
  CHECK_FALSE(c.multiplicity(2));
  CHECK_THROWS_AS(c.position(9), UsageError);
  CHECK_THROWS_AS(Configuration({{0, NAN}}, 1e-9), UsageError);
  auto m = c.moved(4, {1, 1e-10});
  CHECK(m.q_points().size() == 2);
  CHECK(m.position(4) == Point{1, 0});
  CHECK(count_distinct(m, Tolerance{1e-9}).distinct == 2);
}

TEST_CASE("snapshot") {
  Configuration c({{0, 0}, {1, 0}, {1, 0}, {0, 3}}, 1e-9);
  LocalFrame f{{}, 0.0, 1, 2.0};
  auto s = take_snapshot(c, 1, f, true);
  CHECK(s.points.size() == 3);
  CHECK(s.self() == Point{0, 0});
  CHECK(s.multiplicity_bits->at(s.self_index));
  for (std::size_t i = 1; i < s.points.size(); ++i) CHECK(lex_less(s.points[i - 1], s.points[i]));
  auto weak = take_snapshot(c, 0, f, false);
  CHECK_FALSE(weak.multiplicity_bits);
  bool seen = false;
  for (Point p : weak.points) seen |= close(p, {0.5, 0});
  CHECK(seen);
}

TEST_CASE("non-rigid move contract") {
  Configuration c({{0, 0}, {10, 0}}, 1e-9);
  auto [c1, o1] = apply_move(c, 0, {4, 0}, 4, 1);
  CHECK(o1.actual == Point{4, 0});
  CHECK_FALSE(o1.truncated);
  auto [c2, o2] = apply_move(c, 0, {4, 0}, 1.5, 1);
  CHECK(close(o2.actual, {1.5, 0}));
  CHECK(o2.truncated);
  CHECK_THROWS_AS(apply_move(c, 0, {4, 0}, 0.5, 1), ContractViolation);
  CHECK_THROWS_AS(apply_move(c, 0, {4, 0}, 4.5, 1), ContractViolation);
  // below delta the robot must arrive
  CHECK_THROWS_AS(apply_move(c, 0, {0.5, 0}, 0.25, 1), ContractViolation);
  auto [c3, o3] = apply_move(c, 0, {10, 0}, 10, 1);
  CHECK(c3.q_points().size() == 1);
}

TEST_CASE("rng is reproducible and unbiased enough") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());
  Rng r(7);
  std::map<std::size_t, int> hist;
  for (int i = 0; i < 30000; ++i) ++hist[r.below(3)];
  for (auto [k, v] : hist) CHECK(std::abs(v - 10000) < 500);
  for (int i = 0; i < 1000; ++i) {
    double x = r.uniform01();
    CHECK((x >= 0.0 && x < 1.0));
  }
}

TEST_CASE("activation policies") {
  SUBCASE("round robin closes an epoch every n rounds") {
    Activator act({ActivationKind::SeqRoundRobin, 0, {}, 0}, 4);
    for (std::size_t r = 1; r <= 12; ++r) CHECK(act.next(r) == std::vector<RobotId>{(r - 1) % 4});
    CHECK(act.ledger().epochs == 3);
    CHECK(act.ledger().epoch_marks == std::vector<std::size_t>{4, 8, 12});
  }
  SUBCASE("fsync activates all") {
    Activator act({ActivationKind::FSync, 0, {}, 0}, 3);
    CHECK(act.next(1).size() == 3);
    CHECK(act.ledger().epochs == 1);
  }
  SUBCASE("random sequential respects the window") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      Activator act({ActivationKind::SeqRandom, seed, {}, 0}, 5);
      std::vector<std::size_t> last(5, 0);
      for (std::size_t r = 1; r <= 2000; ++r) {
        auto a = act.next(r);
        REQUIRE(a.size() == 1);
        last[a[0]] = r;
        for (std::size_t i = 0; i < 5; ++i) CHECK(r - last[i] < 10);
      }
    }
  }
  SUBCASE("ssync draws nonempty subsets") {
    Activator act({ActivationKind::SSyncRandom, 3, {}, 0}, 6);
    for (std::size_t r = 1; r <= 500; ++r) CHECK_FALSE(act.next(r).empty());
    CHECK(act.ledger().epochs > 0);
  }
  SUBCASE("scripted follows the script then round robin, and refuses starvation") {
    Activator act({ActivationKind::Scripted, 0, {2, 2, 1}, 0}, 3);
    CHECK(act.next(1) == std::vector<RobotId>{2});
    CHECK(act.next(2) == std::vector<RobotId>{2});
    CHECK(act.next(3) == std::vector<RobotId>{1});
    CHECK(act.next(4) == std::vector<RobotId>{0});
    Activator bad({ActivationKind::Scripted, 0, {1, 1, 1, 1}, 3}, 2);
    bad.next(1);
    bad.next(2);
    CHECK_THROWS_AS(bad.next(3), ContractViolation);
  }
  CHECK(activation_kind_from("seq-random") == ActivationKind::SeqRandom);
  CHECK_THROWS_AS(activation_kind_from("x"), UsageError);
  CHECK(is_sequential(ActivationKind::SeqRoundRobin));
  CHECK_FALSE(is_sequential(ActivationKind::SSyncRandom));
}

TEST_CASE("movement adversaries") {
  Point a{0, 0}, b{10, 0};
  CHECK(Mover({MovementKind::Rigid, 1, 0, {}}).decide(a, b) == 10);
  CHECK(Mover({MovementKind::WorstCaseDelta, 1, 0, {}}).decide(a, b) == 1);
  CHECK(Mover({MovementKind::WorstCaseDelta, 1, 0, {}}).decide(a, {0.5, 0}) == 0.5);
  Mover rnd({MovementKind::Random, 1, 5, {}});
  for (int i = 0; i < 100; ++i) {
    double d = rnd.decide(a, b);
    CHECK((d >= 1 && d <= 10));
  }
  Mover sc({MovementKind::Scripted, 1, 0, {0.5, 0.0, 1.0}});
  CHECK(sc.decide(a, b) == 5);
  CHECK(sc.decide(a, b) == 1);
  CHECK(sc.decide(a, b) == 10);
  CHECK(sc.decide(a, b) == 10);
  CHECK(clamp_stop(10, 1, 0.05) == 1);
  CHECK(movement_kind_from("worst-case-delta") == MovementKind::WorstCaseDelta);
}
