#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "oblot/engine.hpp"

namespace oblot {

/// Pattern families drawn by the generator.
enum class PatternStyle { Random, Regular, RegularWithCenter, TwoRings };

std::vector<Point> make_pattern(PatternStyle style, std::size_t k, Rng& rng);

struct ScenarioRecipe {
  AlgorithmKind algorithm = AlgorithmKind::Auto;
  std::size_t n = 5;
  std::size_t k = 5;
  ActivationKind activation = ActivationKind::SeqRoundRobin;
  MovementKind movement = MovementKind::WorstCaseDelta;
  double delta_over_rho = 0.05;
  bool multiplicities = true;
  std::uint64_t seed = 0;
};

/// Random start (optionally with multiplicities), random pattern, random private frames.
Scenario random_scenario(const ScenarioRecipe& r);

struct GeneratorSpec {
  ScenarioRecipe base;
  std::size_t count = 0;
  std::pair<std::size_t, std::size_t> n{5, 5};
  std::pair<std::size_t, std::size_t> k{5, 5};
};

/// count recipes with n and k drawn uniformly in their ranges (n raised to k when needed).
std::vector<ScenarioRecipe> expand(const GeneratorSpec& g);

}  // namespace oblot
