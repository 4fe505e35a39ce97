#include <algorithm>
#include <numeric>

#include "loganom/detectors.hpp"
#include "loganom/errors.hpp"

namespace loganom {
namespace {

// (distance, reference index), ordered so ties prefer the lower index.
using Neighbor = std::pair<double, int>;

}  // namespace

std::vector<double> knn_score_against(const Matrix& points,
                                      const std::vector<int>& ref, int k) {
  const int n = static_cast<int>(points.rows());
  const int m = static_cast<int>(ref.size());
  if (k < 1) throw KTooLarge("k must be >= 1");

  std::vector<char> is_ref(static_cast<std::size_t>(n), 0);
  for (int r : ref) is_ref[static_cast<std::size_t>(r)] = 1;

  std::vector<double> scores(static_cast<std::size_t>(n));
  std::vector<Neighbor> neighbors;
  neighbors.reserve(static_cast<std::size_t>(m));
  for (int i = 0; i < n; ++i) {
    const bool self_in_ref = is_ref[static_cast<std::size_t>(i)];
    const int available = m - (self_in_ref ? 1 : 0);
    if (k > available)
      throw KTooLarge("k=" + std::to_string(k) + " with only " +
                      std::to_string(available) + " candidate neighbours");
    neighbors.clear();
    for (int r : ref) {
      if (r == i) continue;
      neighbors.emplace_back((points.row(i) - points.row(r)).norm(), r);
    }
    std::nth_element(neighbors.begin(), neighbors.begin() + (k - 1),
                     neighbors.end());
    double sum = 0.0;
    for (int j = 0; j < k; ++j) sum += neighbors[static_cast<std::size_t>(j)].first;
    scores[static_cast<std::size_t>(i)] = sum / k;
  }
  return scores;
}

std::vector<double> knn_score(const Matrix& points, int k) {
  const int n = static_cast<int>(points.rows());
  if (k >= n) throw KTooLarge("k must be < n");
  std::vector<int> all(static_cast<std::size_t>(n));
  std::iota(all.begin(), all.end(), 0);
  return knn_score_against(points, all, k);
}

}  // namespace loganom
