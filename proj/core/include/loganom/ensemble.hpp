#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "loganom/detectors.hpp"

namespace loganom {

enum class VoteRule { Union, Intersection, Majority };

std::string to_string(VoteRule rule);
VoteRule vote_rule_from_string(const std::string& name);

struct FilterSettings {
  bool enabled = false;
  double target_fraction = 0.02;  // of the ORIGINAL n, (0, 0.5]
  int max_rounds = 8;
  // When true, later rounds only re-threshold the round-1 scores at the
  // tightened contamination instead of refitting on retained points.
  bool rethreshold_only = false;
};

struct EnsembleConfig {
  // Default roster and contaminations: kNN 2%, iForest 3%, LOF 5%, OCSVM 2%.
  std::vector<DetectorConfig> detectors;
  VoteRule vote = VoteRule::Union;
  FilterSettings filter;
  std::uint64_t seed = 0;

  static EnsembleConfig defaults();
  void validate() const;  // throws ConfigInvalid
};

struct EnsembleReport {
  std::vector<DetectorVerdict> verdicts;
  std::vector<char> consensus_flags;
  // Silhouette of the consensus inlier/outlier split; absent when the
  // consensus flags nobody (or everybody).
  std::optional<double> consensus_silhouette;
  EnsembleConfig config;
  // Wall-clock per stage. Diagnostic only: deliberately excluded from the
  // serialized report so identical runs stay byte-identical.
  std::map<std::string, double> timing_ms;
};

/// Fit and score every enabled detector on the same points, apply the
/// recursive filter when enabled, and combine votes. Detector errors are
/// rethrown annotated with the detector kind.
EnsembleReport run_ensemble(const Matrix& points, const EnsembleConfig& config);

/// Iterative false-positive filter. Round 1 fits and flags at the
/// configured contamination; while the flagged fraction of the original n
/// exceeds target_fraction, the contamination is halved, the model refit on
/// the retained (unflagged) points, all points rescored, and the flag set
/// replaced, up to max_rounds. A missed target sets the warning flag on the
/// returned verdict rather than throwing.
DetectorVerdict recursive_filter(const Matrix& points, DetectorConfig config,
                                 const FilterSettings& settings);

/// union = any flags; intersection = all flag; majority = strictly more
/// than half (2-of-4 ties are NOT flagged). Throws LengthMismatch.
std::vector<char> combine_votes(const std::vector<std::vector<char>>& flag_sets,
                                VoteRule rule);

}  // namespace loganom
