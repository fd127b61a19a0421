#include "oblot/algorithms.hpp"
#include "oblot/errors.hpp"

namespace oblot {

std::string to_string(AlgorithmKind k) {
  switch (k) {
    case AlgorithmKind::SeqPF: return "seq-pf";
    case AlgorithmKind::SeqPFSmall: return "seq-pf-small";
    case AlgorithmKind::SeqGathering: return "seq-gathering";
    case AlgorithmKind::GoToCenterSEC: return "go-to-center-sec";
    case AlgorithmKind::Rendezvous: return "rendezvous";
    case AlgorithmKind::Auto: return "auto";
  }
  return "?";
}

AlgorithmKind algorithm_kind_from(const std::string& s) {
  for (auto k : {AlgorithmKind::SeqPF, AlgorithmKind::SeqPFSmall, AlgorithmKind::SeqGathering,
                 AlgorithmKind::GoToCenterSEC, AlgorithmKind::Rendezvous, AlgorithmKind::Auto})
    if (to_string(k) == s) return k;
  throw UsageError("unknown algorithm '" + s + "'");
}

AlgorithmKind resolve(AlgorithmKind k, std::size_t pattern_size) {
  if (k != AlgorithmKind::Auto) return k;
  if (pattern_size == 0) throw UsageError("auto algorithm needs a pattern");
  if (pattern_size == 1) return AlgorithmKind::SeqGathering;
  if (pattern_size <= 4) return AlgorithmKind::SeqPFSmall;
  return AlgorithmKind::SeqPF;
}

std::string to_string(Stage s) {
  switch (s) {
    case Stage::None: return "none";
    case Stage::Initialization: return "initialization";
    case Stage::LeaderConfiguration: return "leader-configuration";
    case Stage::PartialPatternFormation: return "partial-pattern-formation";
    case Stage::Finalization: return "finalization";
    case Stage::UniqueMaximum: return "unique-maximum";
    case Stage::Equalization: return "equalization";
    case Stage::Gathering: return "gathering";
  }
  return "?";
}

Algorithm::Algorithm(AlgorithmKind kind, std::vector<Point> pattern, Tolerance tol)
    : kind_(resolve(kind, pattern.size())), pattern_(std::move(pattern)), tol_(tol) {
  switch (kind_) {
    case AlgorithmKind::SeqPF:
      if (pattern_.size() < 5) throw UsageError("seq-pf needs at least 5 pattern points");
      model_ = make_pattern_model(pattern_, tol_);
      break;
    case AlgorithmKind::SeqPFSmall:
      if (pattern_.size() < 2 || pattern_.size() > 4) throw UsageError("seq-pf-small needs 2 to 4 pattern points");
      break;
    default: break;
  }
}

Decision Algorithm::decide(const Snapshot& snap) const {
  switch (kind_) {
    case AlgorithmKind::SeqPF: return seq_pf(snap, *model_, tol_);
    case AlgorithmKind::SeqPFSmall: return seq_pf_small(snap, pattern_, tol_);
    case AlgorithmKind::SeqGathering: return seq_gathering(snap, tol_);
    case AlgorithmKind::GoToCenterSEC: return go_to_center_sec(snap, tol_);
    case AlgorithmKind::Rendezvous: return rendezvous(snap);
    case AlgorithmKind::Auto: break;
  }
  throw UsageError("unresolved algorithm");
}

}  // namespace oblot
