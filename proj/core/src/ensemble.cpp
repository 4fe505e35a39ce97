#include "loganom/ensemble.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>

#include "loganom/errors.hpp"
#include "loganom/evaluation.hpp"
#include "loganom/rng.hpp"

namespace loganom {
namespace {

double flagged_fraction(const std::vector<char>& flags) {
  const auto count = std::count(flags.begin(), flags.end(), char(1));
  return static_cast<double>(count) / static_cast<double>(flags.size());
}

Matrix select_rows(const Matrix& points, const std::vector<int>& rows) {
  Matrix out(static_cast<Eigen::Index>(rows.size()), points.cols());
  for (std::size_t i = 0; i < rows.size(); ++i)
    out.row(static_cast<Eigen::Index>(i)) = points.row(rows[i]);
  return out;
}

}  // namespace

std::vector<double> score_against(const Matrix& points,
                                  const std::vector<int>& ref,
                                  const DetectorConfig& config,
                                  std::map<std::string, double>* fit_stats,
                                  bool* warning) {
  config.validate();
  switch (config.kind) {
    case DetectorKind::Knn: {
      if (fit_stats) (*fit_stats)["k"] = config.k;
      return knn_score_against(points, ref, config.k);
    }
    case DetectorKind::Lof: {
      if (fit_stats) (*fit_stats)["k"] = config.k;
      return lof_score_against(points, ref, config.k);
    }
    case DetectorKind::IForest: {
      const Matrix train = select_rows(points, ref);
      const int subsample =
          std::min(config.subsample, static_cast<int>(train.rows()));
      auto forest =
          IsolationForest::fit(train, config.n_trees, subsample, config.seed);
      if (fit_stats) {
        (*fit_stats)["n_trees"] = config.n_trees;
        (*fit_stats)["subsample"] = subsample;
        (*fit_stats)["mean_path_length"] = forest.mean_path_length(points);
      }
      return forest.score(points);
    }
    case DetectorKind::Ocsvm: {
      const Matrix train = select_rows(points, ref);
      auto model = OneClassSvm::fit(train, config.ocsvm);
      if (!model.converged() && warning) *warning = true;
      if (fit_stats) {
        (*fit_stats)["support_vectors"] =
            static_cast<double>(model.support_vector_count());
        (*fit_stats)["margin_error_fraction"] = model.margin_error_fraction();
        (*fit_stats)["rho"] = model.rho();
        (*fit_stats)["gamma"] = model.gamma();
        (*fit_stats)["converged"] = model.converged() ? 1.0 : 0.0;
      }
      return model.score(points);
    }
  }
  throw ConfigInvalid("unreachable detector kind");
}

DetectorVerdict run_detector(const Matrix& points, const DetectorConfig& config) {
  DetectorVerdict verdict;
  verdict.config = config;
  std::vector<int> all(static_cast<std::size_t>(points.rows()));
  std::iota(all.begin(), all.end(), 0);
  verdict.scores =
      score_against(points, all, config, &verdict.fit_stats, &verdict.warning);
  auto thr = threshold_by_contamination(verdict.scores, config.contamination);
  verdict.flags = std::move(thr.flags);
  verdict.threshold = thr.threshold;
  return verdict;
}

DetectorVerdict recursive_filter(const Matrix& points, DetectorConfig config,
                                 const FilterSettings& settings) {
  if (!(settings.target_fraction > 0.0 && settings.target_fraction <= 0.5))
    throw ConfigInvalid("target_fraction must be in (0, 0.5]");
  if (settings.max_rounds < 1) throw ConfigInvalid("max_rounds must be >= 1");

  DetectorVerdict verdict = run_detector(points, config);
  const std::vector<double> round1_scores = verdict.scores;
  double contamination = config.contamination;

  int rounds = 1;
  while (flagged_fraction(verdict.flags) > settings.target_fraction &&
         rounds < settings.max_rounds) {
    contamination *= 0.5;  // geometric tightening toward the target
    ++rounds;
    if (settings.rethreshold_only) {
      auto thr = threshold_by_contamination(round1_scores, contamination);
      verdict.scores = round1_scores;
      verdict.flags = std::move(thr.flags);
      verdict.threshold = thr.threshold;
    } else {
      // Refit on the retained points, rescore everything, replace the flags.
      std::vector<int> retained;
      for (std::size_t i = 0; i < verdict.flags.size(); ++i)
        if (!verdict.flags[i]) retained.push_back(static_cast<int>(i));
      verdict.fit_stats.clear();
      verdict.scores = score_against(points, retained, config,
                                     &verdict.fit_stats, &verdict.warning);
      auto thr = threshold_by_contamination(verdict.scores, contamination);
      verdict.flags = std::move(thr.flags);
      verdict.threshold = thr.threshold;
    }
  }
  verdict.rounds_used = rounds;
  if (flagged_fraction(verdict.flags) > settings.target_fraction)
    verdict.warning = true;  // target missed within max_rounds
  return verdict;
}

std::vector<char> combine_votes(const std::vector<std::vector<char>>& flag_sets,
                                VoteRule rule) {
  if (flag_sets.empty()) throw ConfigInvalid("no verdicts to combine");
  const std::size_t n = flag_sets.front().size();
  for (const auto& f : flag_sets)
    if (f.size() != n) throw LengthMismatch("verdict lengths differ");

  std::vector<char> out(n, 0);
  const std::size_t votes_needed = flag_sets.size() / 2 + 1;  // strict majority
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t votes = 0;
    for (const auto& f : flag_sets) votes += f[i] ? 1 : 0;
    switch (rule) {
      case VoteRule::Union: out[i] = votes > 0; break;
      case VoteRule::Intersection: out[i] = votes == flag_sets.size(); break;
      case VoteRule::Majority: out[i] = votes >= votes_needed; break;
    }
  }
  return out;
}

EnsembleConfig EnsembleConfig::defaults() {
  EnsembleConfig config;
  DetectorConfig knn;
  knn.kind = DetectorKind::Knn;
  knn.contamination = 0.02;
  DetectorConfig iforest;
  iforest.kind = DetectorKind::IForest;
  iforest.contamination = 0.03;
  DetectorConfig lof;
  lof.kind = DetectorKind::Lof;
  lof.contamination = 0.05;
  // LOF needs a neighbourhood wider than any anomalous clump it should
  // catch, and large enough that a neighbourhood centred on any planted
  // cluster still reaches the dense bulk; small clustered anomalies (a
  // reconnection burst) are invisible at k=20.
  lof.k = 50;
  DetectorConfig ocsvm;
  ocsvm.kind = DetectorKind::Ocsvm;
  ocsvm.contamination = 0.02;
  config.detectors = {knn, iforest, lof, ocsvm};
  return config;
}

void EnsembleConfig::validate() const {
  if (detectors.empty()) throw ConfigInvalid("at least one detector required");
  for (const auto& d : detectors) d.validate();
  if (filter.enabled) {
    if (!(filter.target_fraction > 0.0 && filter.target_fraction <= 0.5))
      throw ConfigInvalid("target_fraction must be in (0, 0.5]");
    if (filter.max_rounds < 1) throw ConfigInvalid("max_rounds must be >= 1");
  }
}

EnsembleReport run_ensemble(const Matrix& points, const EnsembleConfig& config) {
  if (points.rows() == 0) throw EmptyInput("no points");
  config.validate();

  EnsembleReport report;
  report.config = config;

  using clock = std::chrono::steady_clock;
  for (const auto& base : config.detectors) {
    DetectorConfig detector = base;
    detector.seed = stage_seed(config.seed, "detector/" + to_string(base.kind));
    const auto t0 = clock::now();
    try {
      report.verdicts.push_back(
          config.filter.enabled
              ? recursive_filter(points, detector, config.filter)
              : run_detector(points, detector));
    } catch (const Error& err) {
      throw Error(to_string(base.kind) + ": " + err.what());
    }
    report.timing_ms[to_string(base.kind)] =
        std::chrono::duration<double, std::milli>(clock::now() - t0).count();
  }

  std::vector<std::vector<char>> flag_sets;
  flag_sets.reserve(report.verdicts.size());
  for (const auto& v : report.verdicts) flag_sets.push_back(v.flags);
  report.consensus_flags = combine_votes(flag_sets, config.vote);

  const auto t0 = clock::now();
  std::vector<int> labels(report.consensus_flags.begin(),
                          report.consensus_flags.end());
  try {
    if (points.rows() >= 3)
      report.consensus_silhouette = silhouette(points, labels);
  } catch (const SingleCluster&) {
    // all-inlier (or all-outlier) consensus: silhouette undefined
  }
  report.timing_ms["silhouette"] =
      std::chrono::duration<double, std::milli>(clock::now() - t0).count();
  return report;
}

std::string to_string(VoteRule rule) {
  switch (rule) {
    case VoteRule::Union: return "union";
    case VoteRule::Intersection: return "intersection";
    case VoteRule::Majority: return "majority";
  }
  return "unknown";
}

VoteRule vote_rule_from_string(const std::string& name) {
  if (name == "union") return VoteRule::Union;
  if (name == "intersection") return VoteRule::Intersection;
  if (name == "majority") return VoteRule::Majority;
  throw ConfigInvalid("unknown vote rule: " + name);
}

}  // namespace loganom
