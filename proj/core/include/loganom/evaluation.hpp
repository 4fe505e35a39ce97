#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "loganom/detectors.hpp"

namespace loganom {

/// Mean silhouette of a labeled partition: s(i) = (b - a) / max(a, b) with
/// a = mean intra-cluster distance (self excluded) and b = the best
/// other-cluster mean distance. Singleton-cluster points contribute 0.
/// Throws SingleCluster when fewer than two labels are present.
double silhouette(const Matrix& points, const std::vector<int>& labels);

struct TuningTrial {
  double contamination = 0.0;
  double silhouette = -1.0;  // -1 for zero-flag (single cluster) trials
  bool failed = false;
  std::string error;
};

struct TuningResult {
  double best_contamination = 0.0;
  double best_silhouette = -1.0;
  std::vector<TuningTrial> trials;  // in seed order
  std::uint64_t seed = 0;
  DetectorKind detector = DetectorKind::Knn;
};

enum class SilhouetteMode {
  Bipartition,     // flagged vs unflagged split (default)
  KMeansClusters,  // k-means clusters of the retained points, k = 3
};

/// Randomized contamination search: n_trials values sampled log-uniformly
/// from `range`, each scored by the silhouette of the induced split in the
/// given space. Failed trials are recorded and excluded from the argmax.
/// Throws ConfigInvalid, AllTrialsFailed.
TuningResult tune_contamination(const Matrix& points, DetectorConfig base,
                                int n_trials, std::pair<double, double> range,
                                std::uint64_t seed,
                                SilhouetteMode mode = SilhouetteMode::Bipartition);

struct TruthMetrics {
  std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
  // Absent when the denominator is zero, never reported as 0.
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> f1;
};

/// Confusion counts and ratios of flags against planted truth labels.
/// Throws LengthMismatch.
TruthMetrics evaluate_against_truth(const std::vector<char>& flags,
                                    const std::vector<int>& truth);

}  // namespace loganom
