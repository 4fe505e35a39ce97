#include <algorithm>
#include <cmath>

#include "loganom/detectors.hpp"
#include "loganom/errors.hpp"

namespace loganom {

ThresholdResult threshold_by_contamination(const std::vector<double>& scores,
                                           double contamination) {
  if (!(contamination > 0.0 && contamination < 0.5))
    throw ConfigInvalid("contamination must be in (0, 0.5)");
  if (scores.empty()) throw EmptyInput("no scores to threshold");
  for (double s : scores)
    if (!std::isfinite(s)) throw ConfigInvalid("non-finite score");

  const std::size_t n = scores.size();
  std::vector<double> sorted(scores);
  std::sort(sorted.begin(), sorted.end());

  // (1 - contamination) empirical quantile; the strict > rule below keeps
  // the flagged count at floor(n * contamination) or fewer.
  const double rank = std::ceil((1.0 - contamination) * static_cast<double>(n));
  const std::size_t idx =
      std::clamp<std::size_t>(static_cast<std::size_t>(rank), 1, n) - 1;

  ThresholdResult out;
  out.threshold = sorted[idx];
  out.flags.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.flags[i] = scores[i] > out.threshold;
  return out;
}

void DetectorConfig::validate() const {
  if (!(contamination > 0.0 && contamination < 0.5))
    throw ConfigInvalid("contamination must be in (0, 0.5)");
  switch (kind) {
    case DetectorKind::Knn:
    case DetectorKind::Lof:
      if (k < 1) throw ConfigInvalid("k must be >= 1");
      break;
    case DetectorKind::IForest:
      if (n_trees < 1) throw ConfigInvalid("n_trees must be >= 1");
      if (subsample < 2) throw ConfigInvalid("subsample must be >= 2");
      break;
    case DetectorKind::Ocsvm:
      if (!(ocsvm.nu > 0.0 && ocsvm.nu <= 1.0))
        throw ConfigInvalid("nu must be in (0, 1]");
      if (ocsvm.gamma == 0.0) throw ConfigInvalid("gamma must be positive or auto");
      if (!(ocsvm.tol > 0.0)) throw ConfigInvalid("tol must be positive");
      break;
  }
}

std::string to_string(DetectorKind kind) {
  switch (kind) {
    case DetectorKind::Knn: return "knn";
    case DetectorKind::IForest: return "iforest";
    case DetectorKind::Lof: return "lof";
    case DetectorKind::Ocsvm: return "ocsvm";
  }
  return "unknown";
}

DetectorKind detector_kind_from_string(const std::string& name) {
  if (name == "knn") return DetectorKind::Knn;
  if (name == "iforest") return DetectorKind::IForest;
  if (name == "lof") return DetectorKind::Lof;
  if (name == "ocsvm") return DetectorKind::Ocsvm;
  throw ConfigInvalid("unknown detector kind: " + name);
}

}  // namespace loganom
