#include <limits>

#include "loganom/detectors.hpp"
#include "loganom/errors.hpp"
#include "loganom/rng.hpp"

namespace loganom {
namespace {

int nearest_centroid(const Matrix& centroids, const Eigen::RowVectorXd& x,
                     double* sq_dist_out) {
  int best = 0;
  double best_sq = std::numeric_limits<double>::infinity();
  for (Eigen::Index c = 0; c < centroids.rows(); ++c) {
    const double sq = (x - centroids.row(c)).squaredNorm();
    if (sq < best_sq) {
      best_sq = sq;
      best = static_cast<int>(c);
    }
  }
  if (sq_dist_out) *sq_dist_out = best_sq;
  return best;
}

}  // namespace

KMeansResult kmeans(const Matrix& points, int k, std::uint64_t seed, int max_iter) {
  const int n = static_cast<int>(points.rows());
  if (k < 1 || k > n) throw KTooLarge("need 1 <= k <= n");

  Rng rng = make_rng(seed, "kmeans");
  Matrix centroids(k, points.cols());

  // k-means++ seeding.
  centroids.row(0) = points.row(static_cast<Eigen::Index>(uniform_int(rng, 0, n - 1)));
  std::vector<double> sq_dist(static_cast<std::size_t>(n),
                              std::numeric_limits<double>::infinity());
  for (int c = 1; c < k; ++c) {
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      const double sq = (points.row(i) - centroids.row(c - 1)).squaredNorm();
      auto& cur = sq_dist[static_cast<std::size_t>(i)];
      cur = std::min(cur, sq);
      total += cur;
    }
    int chosen = n - 1;
    if (total > 0.0) {
      const double target = uniform01(rng) * total;
      double acc = 0.0;
      for (int i = 0; i < n; ++i) {
        acc += sq_dist[static_cast<std::size_t>(i)];
        if (acc >= target) {
          chosen = i;
          break;
        }
      }
    } else {
      chosen = static_cast<int>(uniform_int(rng, 0, n - 1));  // all coincident
    }
    centroids.row(c) = points.row(chosen);
  }

  KMeansResult result;
  result.k = k;
  result.assignments.assign(static_cast<std::size_t>(n), 0);

  for (int iter = 0; iter < max_iter; ++iter) {
    bool changed = false;
    double inertia = 0.0;
    for (int i = 0; i < n; ++i) {
      double sq = 0.0;
      const int c = nearest_centroid(centroids, points.row(i), &sq);
      if (c != result.assignments[static_cast<std::size_t>(i)]) {
        result.assignments[static_cast<std::size_t>(i)] = c;
        changed = true;
      }
      inertia += sq;
    }
    result.iterations = iter + 1;
    result.inertia = inertia;
    if (iter > 0 && !changed) break;  // assignment fixpoint

    // Update step.
    Matrix sums = Matrix::Zero(k, points.cols());
    std::vector<int> counts(static_cast<std::size_t>(k), 0);
    for (int i = 0; i < n; ++i) {
      const int c = result.assignments[static_cast<std::size_t>(i)];
      sums.row(c) += points.row(i);
      ++counts[static_cast<std::size_t>(c)];
    }
    for (int c = 0; c < k; ++c) {
      if (counts[static_cast<std::size_t>(c)] > 0) {
        centroids.row(c) = sums.row(c) / counts[static_cast<std::size_t>(c)];
      } else {
        // Empty cluster: steal the point farthest from its own centroid.
        int worst = 0;
        double worst_sq = -1.0;
        for (int i = 0; i < n; ++i) {
          const int a = result.assignments[static_cast<std::size_t>(i)];
          const double sq = (points.row(i) - centroids.row(a)).squaredNorm();
          if (sq > worst_sq) {
            worst_sq = sq;
            worst = i;
          }
        }
        centroids.row(c) = points.row(worst);
      }
    }
  }

  // Final pass so assignments and inertia match the returned centroids.
  double inertia = 0.0;
  for (int i = 0; i < n; ++i) {
    double sq = 0.0;
    result.assignments[static_cast<std::size_t>(i)] =
        nearest_centroid(centroids, points.row(i), &sq);
    inertia += sq;
  }
  result.inertia = inertia;
  result.centroids = std::move(centroids);
  return result;
}

}  // namespace loganom
