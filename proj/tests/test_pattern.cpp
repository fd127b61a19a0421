#include <doctest.h>

#include <random>

#include "oblot/errors.hpp"
#include "oblot/pattern.hpp"
#include "oracles.hpp"

using namespace oblot;

namespace {

const Tolerance tol{1e-9};

std::vector<Point> regular(int k, double r = 1.0, double phase = 0.0) {
  std::vector<Point> out;
  for (int i = 0; i < k; ++i) out.push_back(polar(r, phase + kTwoPi * i / k));
  return out;
}

std::vector<Point> random_pattern(std::mt19937_64& rng, int k) {
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<Point> out;
  while ((int)out.size() < k) {
    Point p{u(rng), u(rng)};
    bool ok = true;
    for (Point q : out) ok &= distance(p, q) > 0.05;
    if (ok) out.push_back(p);
  }
  return out;
}

}  // namespace

TEST_CASE("pattern sequences: regular pentagon is fully symmetric") {
  auto s = pattern_sequences(regular(5), tol);
  CHECK(s.all.size() == 10);
  CHECK(s.achieving.size() == 10);
  CHECK_THROWS_AS(pattern_sequences({{0, 0}, {1, 0}}, tol), UsageError);
}

TEST_CASE("pattern sequences: matches exhaustive oracle") {
  std::mt19937_64 rng(99);
  for (int t = 0; t < 200; ++t) {
    int k = 5 + (int)(rng() % 6);
    auto p = random_pattern(rng, k);
    if (t % 3 == 0) p.push_back(p[0] * 0.5);  // force a co-radial pair
    auto s = pattern_sequences(p, tol);
    auto sec = smallest_enclosing_circle(p, tol);
    auto all = oracle::all_pattern_sequences(p, sec.center, tol.eps);
    REQUIRE(all.size() == s.all.size());
    auto best = all[0];
    for (auto& x : all)
      if (oracle::compare(x, best, 1e-9) < 0) best = x;
    const auto& mu = s.mu_hat();
    for (std::size_t i = 0; i < best.size(); ++i) {
      CHECK(std::get<0>(best[i]) == doctest::Approx(mu.triples[i].angle).epsilon(1e-9));
      CHECK(std::get<1>(best[i]) == doctest::Approx(mu.triples[i].first).epsilon(1e-9));
      CHECK(std::get<2>(best[i]) == doctest::Approx(mu.triples[i].second).epsilon(1e-9));
    }
  }
}

TEST_CASE("pattern sequences: square plus offset point has a unique minimum") {
  std::vector<Point> p{{1, 0}, {0, 1}, {-1, 0}, {0, -1}, {0.3, 0.1}};
  auto s = pattern_sequences(p, tol);
  CHECK(s.achieving.size() == 1);
}

TEST_CASE("pattern sequences: figure pattern reproduces the annotated mu-hat") {
  auto p = oracle::figure_pattern();
  auto s = pattern_sequences(p, tol);
  const auto& mu = s.mu_hat();
  // angle in degrees, radii as fractions of the SEC radius
  const double want[][3] = {{0, 1. / 3, 1},  {45, 1, 1. / 6}, {45, 1. / 6, 1},  {45, 1, 1. / 3}, {45, 1. / 3, 1},
                            {45, 1, 1. / 6}, {30, 1. / 6, 1. / 3}, {15, 1. / 3, 1}, {90, 1, 1. / 3}};
  REQUIRE(mu.triples.size() == 9);
  for (int i = 0; i < 9; ++i) {
    CHECK(mu.triples[i].angle == doctest::Approx(oracle::deg(want[i][0])));
    CHECK(mu.triples[i].first / 3 == doctest::Approx(want[i][1]));
    CHECK(mu.triples[i].second / 3 == doctest::Approx(want[i][2]));
  }
  // starts at the inner point of the 45-degree bearing ray
  CHECK(distance(p[mu.start_index], p[0]) < 1e-12);
  auto d = circular_decomposition(p, tol);
  REQUIRE(d.circles.size() == 3);
  CHECK(d.circles[0].radius == doctest::Approx(3));
  CHECK(d.circles[1].radius == doctest::Approx(1));
  CHECK(d.circles[2].radius == doctest::Approx(0.5));
}

TEST_CASE("pattern sequences: similarity invariance") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int t = 0; t < 100; ++t) {
    auto p = random_pattern(rng, 6);
    double a = u(rng) * kPi, s = 0.5 + std::abs(u(rng)) * 3;
    bool refl = t % 2;
    std::vector<Point> tp;
    for (Point x : p) tp.push_back(rotate(refl ? Point{x.x, -x.y} : x, a) * s + Point{3, -1});
    auto m1 = pattern_sequences(p, tol).mu_hat();
    auto m2 = pattern_sequences(tp, tol).mu_hat();
    for (std::size_t i = 0; i < m1.triples.size(); ++i) {
      CHECK(m1.triples[i].angle == doctest::Approx(m2.triples[i].angle).epsilon(1e-9));
      CHECK(m1.triples[i].first * s == doctest::Approx(m2.triples[i].first).epsilon(1e-9));
    }
    if (refl) CHECK(m1.direction != m2.direction);
  }
}

TEST_CASE("circular decomposition") {
  CHECK(circular_decomposition(regular(6), tol).circles.size() == 1);
  auto p = regular(5);
  p.push_back({0, 0});
  auto d = circular_decomposition(p, tol);
  CHECK(d.circles.size() == 2);
  CHECK(d.circles.back().radius == doctest::Approx(0.0));
  CHECK(d.membership.back() == 1);
}

TEST_CASE("is_similar") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int t = 0; t < 10; ++t) {
    auto p = random_pattern(rng, 7);
    CHECK(is_similar(p, p, tol));
    for (int j = 0; j < 1000; ++j) {
      double a = u(rng) * kPi, s = 0.1 + std::abs(u(rng)) * 10;
      bool refl = j % 2;
      Point sh{u(rng) * 5, u(rng) * 5};
      std::vector<Point> q;
      for (Point x : p) q.push_back(rotate(refl ? Point{x.x, -x.y} : x, a) * s + sh);
      std::shuffle(q.begin(), q.end(), rng);
      REQUIRE(is_similar(q, p, tol));
    }
    auto q = p;
    double rho = smallest_enclosing_circle(p, tol).radius;
    q[3] = q[3] + Point{10 * tol.eps * rho, 0};
    CHECK_FALSE(is_similar(q, p, tol));
  }
  CHECK_FALSE(is_similar(regular(5), regular(6), tol));
}

TEST_CASE("pattern model") {
  auto m = make_pattern_model(oracle::figure_pattern(), tol);
  CHECK(norm(m.points[m.first_boundary]) == doctest::Approx(1.0));
  CHECK_FALSE(m.center_index.has_value());
  CHECK(m.order.size() == 9);
}
