#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "loganom/features.hpp"

namespace loganom {

// Every detector scores with the same orientation: higher = more anomalous.

// -- k-nearest-neighbour distance ------------------------------------------

/// Mean Euclidean distance to the k nearest neighbours, self excluded.
/// Exact brute-force search; distance ties break toward the lower index.
/// Throws KTooLarge unless 1 <= k < n.
std::vector<double> knn_score(const Matrix& points, int k);

/// Score every row of `points` against the reference rows `ref` (indices
/// into `points`). A query row that is itself a reference excludes itself.
std::vector<double> knn_score_against(const Matrix& points,
                                      const std::vector<int>& ref, int k);

// -- local outlier factor -----------------------------------------------

/// Classic LOF with k-distance neighbourhoods including all ties. Points
/// whose neighbourhood is fully duplicated (infinite local reachability
/// density on both sides) get LOF = 1. Throws KTooLarge.
std::vector<double> lof_score(const Matrix& points, int k);

std::vector<double> lof_score_against(const Matrix& points,
                                      const std::vector<int>& ref, int k);

// -- isolation forest ------------------------------------------------------

/// Average unsuccessful-search path length c(m) = 2 H(m-1) - 2 (m-1)/m.
/// Exact harmonic numbers for m <= 1000, H(m) ~ ln(m) + gamma above.
double iforest_c(std::size_t m);

class IsolationForest {
 public:
  /// Trees grown on subsamples by recursive uniform (feature, split) choice,
  /// height limit ceil(log2(subsample)). Deterministic for a fixed seed.
  /// Throws SubsampleTooLarge, ConfigInvalid.
  static IsolationForest fit(const Matrix& points, int n_trees, int subsample,
                             std::uint64_t seed);

  /// s(x) = 2^(-E[h(x)] / c(subsample)); always in (0, 1).
  std::vector<double> score(const Matrix& points) const;

  int n_trees() const { return n_trees_; }
  int subsample() const { return subsample_; }
  double mean_path_length(const Matrix& points) const;

 private:
  struct Node {
    int feature = -1;      // -1 marks a leaf
    double split = 0.0;
    int left = -1, right = -1;
    int size = 0;          // leaf population
  };
  struct Tree {
    std::vector<Node> nodes;
  };

  double path_length(const Tree& tree, const Eigen::RowVectorXd& x) const;

  std::vector<Tree> trees_;
  int n_trees_ = 0;
  int subsample_ = 0;
  double c_norm_ = 1.0;
};

// -- one-class SVM ---------------------------------------------------------

struct OcsvmParams {
  double nu = 0.1;       // (0, 1]
  double gamma = -1.0;   // <= 0 means "auto" = 1 / (d * mean column variance)
  double tol = 1e-4;     // KKT gap tolerance
  long long max_iter = -1;  // < 0 means 100000 * n pair steps
};

class OneClassSvm {
 public:
  /// nu-parameterized dual (min 1/2 a'Ka, 0 <= a_i <= 1/(nu n), sum a = 1)
  /// solved by pairwise coordinate optimization over an RBF kernel.
  /// Throws BadGamma, ConfigInvalid. Non-convergence is reported via
  /// converged(), not thrown; the best iterate is kept.
  static OneClassSvm fit(const Matrix& points, const OcsvmParams& params);

  /// score(x) = rho - sum_j alpha_j K(x_j, x); positive = outside boundary.
  std::vector<double> score(const Matrix& points) const;

  bool converged() const { return converged_; }
  double rho() const { return rho_; }
  double gamma() const { return gamma_; }
  std::size_t support_vector_count() const;
  /// Fraction of training points strictly outside the boundary.
  double margin_error_fraction() const { return margin_error_fraction_; }

 private:
  Matrix support_points_;        // rows with alpha > 0
  std::vector<double> alphas_;   // matching support_points_ rows
  double rho_ = 0.0;
  double gamma_ = 1.0;
  double margin_error_fraction_ = 0.0;
  bool converged_ = true;
};

// -- k-means ---------------------------------------------------------------

struct KMeansResult {
  int k = 0;
  Matrix centroids;             // k x p
  std::vector<int> assignments; // n, nearest-centroid at fixpoint
  double inertia = 0.0;
  int iterations = 0;
};

/// k-means++ seeding then Lloyd iterations to an assignment fixpoint. Empty
/// clusters are repaired by stealing the point farthest from its centroid.
/// Deterministic for a fixed seed. Throws KTooLarge unless 1 <= k <= n.
KMeansResult kmeans(const Matrix& points, int k, std::uint64_t seed,
                    int max_iter = 300);

// -- contamination thresholding -------------------------------------------

struct ThresholdResult {
  std::vector<char> flags;  // 1 = anomalous
  double threshold = 0.0;
};

/// threshold = the (1 - contamination) empirical quantile; only scores
/// STRICTLY above it are flagged, so ties at the threshold stay unflagged
/// and the flag count never exceeds ceil(n * contamination).
/// Throws ConfigInvalid for contamination outside (0, 0.5) or non-finite
/// scores.
ThresholdResult threshold_by_contamination(const std::vector<double>& scores,
                                           double contamination);

// -- uniform detector configuration ------------------------------------

enum class DetectorKind { Knn, IForest, Lof, Ocsvm };

std::string to_string(DetectorKind kind);
DetectorKind detector_kind_from_string(const std::string& name);

struct DetectorConfig {
  DetectorKind kind = DetectorKind::Knn;
  double contamination = 0.02;  // (0, 0.5)
  int k = 20;                   // kNN / LOF neighbours
  int n_trees = 100;            // iForest
  int subsample = 256;          // iForest (clamped to n at fit time)
  OcsvmParams ocsvm;
  std::uint64_t seed = 0;       // iForest subsampling; derived per stage

  void validate() const;  // throws ConfigInvalid
};

struct DetectorVerdict {
  std::vector<double> scores;
  std::vector<char> flags;
  double threshold = 0.0;
  DetectorConfig config;
  std::map<std::string, double> fit_stats;
  int rounds_used = 1;    // > 1 only after recursive filtering
  bool warning = false;   // solver non-convergence / filter target missed
};

/// Fit + score + threshold one detector on `points` under the uniform
/// higher-is-anomalous contract.
DetectorVerdict run_detector(const Matrix& points, const DetectorConfig& config);

/// Raw scores for every row of `points` from a model fit on rows `ref`.
std::vector<double> score_against(const Matrix& points,
                                  const std::vector<int>& ref,
                                  const DetectorConfig& config,
                                  std::map<std::string, double>* fit_stats,
                                  bool* warning);

}  // namespace loganom
