#include "loganom/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "loganom/errors.hpp"
#include "loganom/rng.hpp"

namespace loganom {

double silhouette(const Matrix& points, const std::vector<int>& labels) {
  const std::size_t n = static_cast<std::size_t>(points.rows());
  if (labels.size() != n) throw LengthMismatch("labels do not match points");
  if (n < 3) throw ConfigInvalid("silhouette needs at least 3 points");

  // Compact the label set; cluster sizes drive the singleton convention.
  std::map<int, int> index_of;
  for (int l : labels) index_of.emplace(l, static_cast<int>(index_of.size()));
  const int n_clusters = static_cast<int>(index_of.size());
  if (n_clusters < 2) throw SingleCluster("fewer than 2 labels present");

  std::vector<int> cluster(n);
  std::vector<std::size_t> size(static_cast<std::size_t>(n_clusters), 0);
  for (std::size_t i = 0; i < n; ++i) {
    cluster[i] = index_of[labels[i]];
    ++size[static_cast<std::size_t>(cluster[i])];
  }

  double total = 0.0;
  std::vector<double> dist_sum(static_cast<std::size_t>(n_clusters));
  for (std::size_t i = 0; i < n; ++i) {
    const int own = cluster[i];
    if (size[static_cast<std::size_t>(own)] == 1) continue;  // contributes 0
    std::fill(dist_sum.begin(), dist_sum.end(), 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      dist_sum[static_cast<std::size_t>(cluster[j])] +=
          (points.row(static_cast<Eigen::Index>(i)) -
           points.row(static_cast<Eigen::Index>(j)))
              .norm();
    }
    const double a = dist_sum[static_cast<std::size_t>(own)] /
                     static_cast<double>(size[static_cast<std::size_t>(own)] - 1);
    double b = std::numeric_limits<double>::infinity();
    for (int c = 0; c < n_clusters; ++c) {
      if (c == own || size[static_cast<std::size_t>(c)] == 0) continue;
      b = std::min(b, dist_sum[static_cast<std::size_t>(c)] /
                          static_cast<double>(size[static_cast<std::size_t>(c)]));
    }
    const double denom = std::max(a, b);
    if (denom > 0.0) total += (b - a) / denom;
  }
  return total / static_cast<double>(n);
}

TuningResult tune_contamination(const Matrix& points, DetectorConfig base,
                                int n_trials, std::pair<double, double> range,
                                std::uint64_t seed, SilhouetteMode mode) {
  if (n_trials < 1) throw ConfigInvalid("n_trials must be >= 1");
  if (!(range.first > 0.0 && range.second < 0.5 && range.first <= range.second))
    throw ConfigInvalid("contamination range must lie within (0, 0.5)");

  TuningResult result;
  result.seed = seed;
  result.detector = base.kind;
  result.trials.reserve(static_cast<std::size_t>(n_trials));

  // Candidate values are drawn up front so the trial list is fixed by seed
  // order even if trials were evaluated out of order.
  Rng rng = make_rng(seed, "tune/" + to_string(base.kind));
  std::vector<double> candidates(static_cast<std::size_t>(n_trials));
  const double log_lo = std::log(range.first), log_hi = std::log(range.second);
  for (auto& c : candidates) c = std::exp(uniform_real(rng, log_lo, log_hi));

  // Scores do not depend on contamination, so fit once and re-threshold.
  std::vector<double> scores;
  std::string fit_error;
  try {
    DetectorConfig probe = base;
    probe.contamination = 0.25;  // any valid value; only scores are kept
    scores = run_detector(points, probe).scores;
  } catch (const Error& err) {
    fit_error = err.what();
  }

  int best = -1;
  for (double contamination : candidates) {
    TuningTrial trial;
    trial.contamination = contamination;
    if (!fit_error.empty()) {
      trial.failed = true;
      trial.error = fit_error;
      result.trials.push_back(trial);
      continue;
    }
    try {
      auto thr = threshold_by_contamination(scores, contamination);
      const auto flagged =
          std::count(thr.flags.begin(), thr.flags.end(), char(1));
      if (flagged == 0 ||
          flagged == static_cast<std::ptrdiff_t>(thr.flags.size())) {
        trial.silhouette = -1.0;  // single-cluster split, by convention
      } else if (mode == SilhouetteMode::Bipartition) {
        std::vector<int> labels(thr.flags.begin(), thr.flags.end());
        trial.silhouette = silhouette(points, labels);
      } else {
        // Alternate mode: cohesion of the retained points' k-means clusters
        // after the flagged ones are removed.
        std::vector<int> retained;
        for (std::size_t i = 0; i < thr.flags.size(); ++i)
          if (!thr.flags[i]) retained.push_back(static_cast<int>(i));
        Matrix kept(static_cast<Eigen::Index>(retained.size()), points.cols());
        for (std::size_t i = 0; i < retained.size(); ++i)
          kept.row(static_cast<Eigen::Index>(i)) = points.row(retained[i]);
        const auto clustering = kmeans(kept, 3, seed);
        trial.silhouette = silhouette(kept, clustering.assignments);
      }
    } catch (const Error& err) {
      trial.failed = true;
      trial.error = err.what();
    }
    if (!trial.failed &&
        (best < 0 || trial.silhouette > result.trials[static_cast<std::size_t>(best)]
                                            .silhouette)) {
      best = static_cast<int>(result.trials.size());
    }
    result.trials.push_back(trial);
  }

  if (best < 0) throw AllTrialsFailed("every tuning trial failed");
  result.best_contamination =
      result.trials[static_cast<std::size_t>(best)].contamination;
  result.best_silhouette = result.trials[static_cast<std::size_t>(best)].silhouette;
  return result;
}

TruthMetrics evaluate_against_truth(const std::vector<char>& flags,
                                    const std::vector<int>& truth) {
  if (flags.size() != truth.size())
    throw LengthMismatch("flags and truth lengths differ");
  TruthMetrics m;
  for (std::size_t i = 0; i < flags.size(); ++i) {
    const bool flagged = flags[i] != 0;
    const bool positive = truth[i] != 0;
    if (flagged && positive) ++m.tp;
    else if (flagged && !positive) ++m.fp;
    else if (!flagged && positive) ++m.fn;
    else ++m.tn;
  }
  if (m.tp + m.fp > 0)
    m.precision = static_cast<double>(m.tp) / static_cast<double>(m.tp + m.fp);
  if (m.tp + m.fn > 0)
    m.recall = static_cast<double>(m.tp) / static_cast<double>(m.tp + m.fn);
  if (m.precision && m.recall && (*m.precision + *m.recall) > 0.0)
    m.f1 = 2.0 * *m.precision * *m.recall / (*m.precision + *m.recall);
  return m;
}

}  // namespace loganom
