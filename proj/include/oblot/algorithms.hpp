#pragma once

#include <optional>
#include <string>
#include <vector>

#include "oblot/geometry.hpp"
#include "oblot/model.hpp"
#include "oblot/pattern.hpp"

namespace oblot {

enum class AlgorithmKind { SeqPF, SeqPFSmall, SeqGathering, GoToCenterSEC, Rendezvous, Auto };

std::string to_string(AlgorithmKind k);
AlgorithmKind algorithm_kind_from(const std::string& s);
/// Auto resolves on pattern size: 1 gathering, 2..4 SeqPFSmall, 5+ SeqPF.
AlgorithmKind resolve(AlgorithmKind k, std::size_t pattern_size);

enum class Stage {
  None,
  Initialization,
  LeaderConfiguration,
  PartialPatternFormation,
  Finalization,
  UniqueMaximum,
  Equalization,
  Gathering,
};

std::string to_string(Stage s);

/// A Compute result in the observer's local frame.
struct Decision {
  Point destination;
  Stage stage = Stage::None;
  std::vector<Point> path;  // waypoints after the start; two for a detour through O
};

/// Snapshot moved so SEC(Q) is the unit circle at the origin. Only translation and scaling.
struct Normalized {
  std::vector<Point> q;
  Point self;
  Point center;
  double scale = 1.0;

  Point to_local(Point n) const { return center + n * scale; }
};

Normalized normalize(const Snapshot& snap, Tolerance tol);

struct JointConfiguration {
  std::vector<Point> robots;   // normalized
  std::vector<Point> pattern;  // placed pattern, same SEC
  Similarity placement;        // pattern model points -> placed
  Point anchor;                // q_j
  Point inner;                 // the interior point of theta_1 in lambda(Q)
  Chirality clockwise = Chirality::Clockwise;
  std::optional<LeaderAngularSequence> leader;  // over robots and placed pattern
};

struct PatternRanking {
  std::vector<std::size_t> order;   // indices into the placed pattern, p_1 first
  std::vector<Point> points;        // p_1 ... p_k
  std::vector<std::size_t> circle;  // circle index of each ranked point
};

struct WalkerChoice {
  Point walker;
  Point target;
  std::vector<Point> path;
};

// Procedures of SeqPF. Everything below Separate works in normalized coordinates.

/// Local frame: one unit along +x unless blocked.
Point separate(const Snapshot& snap, Tolerance tol);

/// Removing every robot at q shrinks the SEC.
bool sec_responsible(const std::vector<Point>& q, Point p, Tolerance tol);

/// Placement of the pattern model with its first boundary point on anchor, mu-hat order running in dir.
Similarity place_pattern(const PatternModel& m, Point anchor, Chirality dir);

PatternRanking rank_pattern_points(const std::vector<Point>& placed, const CircularDecomposition& circles_of_model,
                                   Point anchor, Chirality clockwise, Tolerance tol);
PatternRanking rank_pattern_points(const JointConfiguration& g, const PatternModel& m, Tolerance tol);

std::optional<Point> last(const std::vector<Point>& q, Point self, const PatternModel& m, Tolerance tol);

std::optional<JointConfiguration> overlap(const std::vector<Point>& q, const PatternModel& m, Tolerance tol);

/// m is needed only when gamma is empty and the observer sits at O; without it xi comes from S'(Q) alone.
Point leader(const std::vector<Point>& q, Point self, const std::optional<JointConfiguration>& gamma,
             const PatternModel* m, Tolerance tol);

std::optional<WalkerChoice> choose_walker(const JointConfiguration& g, const PatternRanking& r, Tolerance tol);

Decision occupy(const JointConfiguration& g, const PatternModel& m, Point self, Tolerance tol);

/// Full SeqPF Compute; local destination.
Decision seq_pf(const Snapshot& snap, const PatternModel& m, Tolerance tol);

// SeqPF' for 2..4 pattern points.
double distance_deviation(const std::vector<Point>& q_rest, const std::vector<Point>& p_rest);
Decision seq_pf_small(const Snapshot& snap, const std::vector<Point>& pattern, Tolerance tol);

// Gathering family.
Decision seq_gathering(const Snapshot& snap, Tolerance tol);
Decision go_to_center_sec(const Snapshot& snap, Tolerance tol);
Decision rendezvous(const Snapshot& snap);

/// A configured robot program. Pure; safe to share across threads.
class Algorithm {
 public:
  Algorithm(AlgorithmKind kind, std::vector<Point> pattern, Tolerance tol);

  Decision decide(const Snapshot& snap) const;
  AlgorithmKind kind() const { return kind_; }
  bool needs_multiplicity() const { return kind_ == AlgorithmKind::SeqGathering; }
  const std::optional<PatternModel>& model() const { return model_; }

 private:
  AlgorithmKind kind_;
  std::vector<Point> pattern_;
  Tolerance tol_;
  std::optional<PatternModel> model_;
};

}  // namespace oblot
