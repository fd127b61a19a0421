#include "oblot/generator.hpp"

#include <algorithm>
#include <cmath>

#include "oblot/errors.hpp"

namespace oblot {

namespace {

Point in_disk(Rng& rng, double r) {
  double a = rng.uniform(0.0, kTwoPi);
  return polar(r * std::sqrt(rng.uniform01()), a);
}

}  // namespace

std::vector<Point> make_pattern(PatternStyle style, std::size_t k, Rng& rng) {
  std::vector<Point> out;
  const double phase = rng.uniform(0.0, kTwoPi);
  switch (style) {
    case PatternStyle::Random:
      while (out.size() < k) {
        Point p = in_disk(rng, 1.0);
        bool apart = std::all_of(out.begin(), out.end(), [&](Point q) { return distance(p, q) > 0.05; });
        if (apart) out.push_back(p);
      }
      break;
    case PatternStyle::Regular:
      for (std::size_t i = 0; i < k; ++i) out.push_back(polar(1.0, phase + kTwoPi * i / k));
      break;
    case PatternStyle::RegularWithCenter:
      for (std::size_t i = 0; i + 1 < k; ++i) out.push_back(polar(1.0, phase + kTwoPi * i / (k - 1)));
      out.push_back({0, 0});
      break;
    case PatternStyle::TwoRings: {
      std::size_t outer = (k + 1) / 2;
      for (std::size_t i = 0; i < outer; ++i) out.push_back(polar(1.0, phase + kTwoPi * i / outer));
      for (std::size_t i = outer; i < k; ++i) out.push_back(polar(0.5, phase + kPi / outer + kTwoPi * (i - outer) / (k - outer)));
      break;
    }
  }
  return out;
}

Scenario random_scenario(const ScenarioRecipe& r) {
  if (r.n < r.k) throw UsageError("generator: n must be at least k");
  Rng rng(r.seed);
  Scenario s;
  s.algorithm = r.algorithm;

  auto style = static_cast<PatternStyle>(rng.below(4));
  if (r.k < 3 || (style == PatternStyle::RegularWithCenter && r.k < 4)) style = PatternStyle::Random;
  s.pattern = make_pattern(style, r.k, rng);

  const double scale = std::exp(rng.uniform(std::log(0.5), std::log(20.0)));
  const Point offset = in_disk(rng, 3.0 * scale);
  std::size_t distinct = r.n;
  if (r.multiplicities) distinct = 1 + rng.below(r.n);
  std::vector<Point> points;
  while (points.size() < distinct) {
    Point p = offset + in_disk(rng, scale);
    bool apart = std::all_of(points.begin(), points.end(), [&](Point q) { return distance(p, q) > 1e-3 * scale; });
    if (apart) points.push_back(p);
  }
  for (std::size_t i = 0; i < r.n; ++i) s.robots.push_back(i < distinct ? points[i] : points[rng.below(distinct)]);
  for (std::size_t i = s.robots.size(); i > 1; --i) std::swap(s.robots[i - 1], s.robots[rng.below(i)]);

  double rho0 = smallest_enclosing_circle(s.robots, Tolerance{}).radius;
  if (rho0 <= 0.0) rho0 = scale;
  s.frames = random_frames(r.n, rng.next(), 0.1 * rho0, rho0);
  s.activation = ActivationPolicy{r.activation, rng.next(), {}, 0};
  s.movement = MovementPolicy{r.movement, r.delta_over_rho * rho0, rng.next(), {}};
  s.weak_detection = resolve(r.algorithm, r.k) == AlgorithmKind::SeqGathering;
  s.seed = r.seed;
  return s;
}

std::vector<ScenarioRecipe> expand(const GeneratorSpec& g) {
  if (g.n.first > g.n.second || g.k.first > g.k.second) throw UsageError("generator: empty range");
  Rng rng(g.base.seed);
  std::vector<ScenarioRecipe> out;
  for (std::size_t i = 0; i < g.count; ++i) {
    ScenarioRecipe r = g.base;
    r.k = g.k.first + rng.below(g.k.second - g.k.first + 1);
    r.n = g.n.first + rng.below(g.n.second - g.n.first + 1);
    r.n = std::max(r.n, r.k);
    r.seed = rng.next();
    out.push_back(r);
  }
  return out;
}

}  // namespace oblot
