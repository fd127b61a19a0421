#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <vector>

#include "oblot/geometry.hpp"

namespace oblot {

/// z -> scale * (reflect ? conj(z) : z) + shift, in complex coordinates.
struct Similarity {
  std::complex<double> scale{1.0, 0.0};
  std::complex<double> shift{0.0, 0.0};
  bool reflect = false;

  Point apply(Point p) const;
  std::vector<Point> apply(const std::vector<Point>& ps) const;
  double factor() const { return std::abs(scale); }

  /// The map sending a1 -> b1 and a2 -> b2 (a1 != a2).
  static Similarity through(Point a1, Point a2, Point b1, Point b2, bool reflect);
};

struct PatternTriple {
  double angle = 0.0;
  double first = 0.0;
  double second = 0.0;
};

struct PatternSequence {
  std::vector<PatternTriple> triples;
  std::vector<std::size_t> order;  // pattern indices visited, starting at start_index
  Chirality direction = Chirality::Clockwise;
  std::size_t start_index = 0;
};

struct PatternSequenceSet {
  std::vector<PatternSequence> all;
  std::size_t minimum = 0;
  std::vector<std::size_t> achieving;

  const PatternSequence& mu_hat() const { return all[minimum]; }
};

/// -1, 0, 1; distances compared with eps * scale.
int compare_sequences(const PatternSequence& a, const PatternSequence& b, double scale, Tolerance tol);

/// Points at the SEC center belong to no ray and are left out, so 2(k-1) sequences come back then.
PatternSequenceSet pattern_sequences(const std::vector<Point>& pattern, Tolerance tol);

struct CircularDecomposition {
  Point center;
  std::vector<Circle> circles;         // decreasing radius
  std::vector<std::size_t> membership;  // circle index per input point
};

CircularDecomposition circular_decomposition(const std::vector<Point>& pattern, Tolerance tol);

bool is_similar(const std::vector<Point>& q, const std::vector<Point>& pattern, Tolerance tol);

/// Equal as point sets, matching within eps.
bool same_point_set(const std::vector<Point>& a, const std::vector<Point>& b, Tolerance tol);

/// Everything SeqPF needs about a pattern, computed once.
struct PatternModel {
  std::vector<Point> points;  // SEC center at origin, SEC radius 1
  PatternSequenceSet sequences;
  CircularDecomposition decomposition;
  std::vector<std::size_t> order;  // traversal of mu-hat
  Chirality direction = Chirality::Clockwise;
  std::size_t first_boundary = 0;  // first point of order on the SEC
  std::optional<std::size_t> center_index;
};

PatternModel make_pattern_model(const std::vector<Point>& pattern, Tolerance tol);

}  // namespace oblot
