#include <algorithm>
#include <numeric>

#include "loganom/detectors.hpp"
#include "loganom/errors.hpp"

namespace loganom {
namespace {

// Local reachability density is capped here instead of going infinite on
// fully duplicated neighbourhoods; mutually-duplicate points then get
// LOF = cap/cap = 1, the convention for coincident data.
constexpr double kLrdCap = 1e10;

struct RefModel {
  std::vector<double> kdist;          // k-distance per reference point
  std::vector<std::vector<int>> nbrs; // k-distance neighbourhood (all ties)
  std::vector<double> lrd;
};

}  // namespace

std::vector<double> lof_score_against(const Matrix& points,
                                      const std::vector<int>& ref, int k) {
  const int n = static_cast<int>(points.rows());
  const int m = static_cast<int>(ref.size());
  if (k < 1 || k >= m) throw KTooLarge("need 1 <= k < reference size");

  std::vector<int> ref_slot(static_cast<std::size_t>(n), -1);
  for (int a = 0; a < m; ++a)
    ref_slot[static_cast<std::size_t>(ref[static_cast<std::size_t>(a)])] = a;

  // Pairwise distances among reference points.
  Matrix ref_pts(m, points.cols());
  for (int a = 0; a < m; ++a) ref_pts.row(a) = points.row(ref[static_cast<std::size_t>(a)]);
  Matrix dist(m, m);
  for (int a = 0; a < m; ++a) {
    dist(a, a) = 0.0;
    for (int b = a + 1; b < m; ++b) {
      const double d = (ref_pts.row(a) - ref_pts.row(b)).norm();
      dist(a, b) = d;
      dist(b, a) = d;
    }
  }

  RefModel model;
  model.kdist.resize(static_cast<std::size_t>(m));
  model.nbrs.resize(static_cast<std::size_t>(m));
  std::vector<double> others;
  others.reserve(static_cast<std::size_t>(m - 1));
  for (int a = 0; a < m; ++a) {
    others.clear();
    for (int b = 0; b < m; ++b)
      if (b != a) others.push_back(dist(a, b));
    std::nth_element(others.begin(), others.begin() + (k - 1), others.end());
    const double kd = others[static_cast<std::size_t>(k - 1)];
    model.kdist[static_cast<std::size_t>(a)] = kd;
    for (int b = 0; b < m; ++b)
      if (b != a && dist(a, b) <= kd)
        model.nbrs[static_cast<std::size_t>(a)].push_back(b);
  }

  model.lrd.resize(static_cast<std::size_t>(m));
  for (int a = 0; a < m; ++a) {
    double sum = 0.0;
    const auto& nb = model.nbrs[static_cast<std::size_t>(a)];
    for (int b : nb)
      sum += std::max(model.kdist[static_cast<std::size_t>(b)], dist(a, b));
    const double mean_reach = sum / static_cast<double>(nb.size());
    model.lrd[static_cast<std::size_t>(a)] =
        mean_reach > 0.0 ? std::min(1.0 / mean_reach, kLrdCap) : kLrdCap;
  }

  std::vector<double> scores(static_cast<std::size_t>(n));
  std::vector<std::pair<double, int>> cand;
  cand.reserve(static_cast<std::size_t>(m));
  for (int i = 0; i < n; ++i) {
    const int self = ref_slot[static_cast<std::size_t>(i)];
    if (self >= 0) {
      // In-sample: classic LOF over the precomputed model.
      const auto& nb = model.nbrs[static_cast<std::size_t>(self)];
      double sum = 0.0;
      for (int b : nb) sum += model.lrd[static_cast<std::size_t>(b)];
      scores[static_cast<std::size_t>(i)] =
          sum / static_cast<double>(nb.size()) / model.lrd[static_cast<std::size_t>(self)];
      continue;
    }
    cand.clear();
    for (int a = 0; a < m; ++a)
      cand.emplace_back((points.row(i) - ref_pts.row(a)).norm(), a);
    std::nth_element(cand.begin(), cand.begin() + (k - 1), cand.end());
    const double kd = cand[static_cast<std::size_t>(k - 1)].first;
    double reach_sum = 0.0, lrd_sum = 0.0;
    int count = 0;
    for (const auto& [d, a] : cand) {
      if (d > kd) continue;
      reach_sum += std::max(model.kdist[static_cast<std::size_t>(a)], d);
      lrd_sum += model.lrd[static_cast<std::size_t>(a)];
      ++count;
    }
    const double mean_reach = reach_sum / count;
    const double lrd_q = mean_reach > 0.0 ? std::min(1.0 / mean_reach, kLrdCap) : kLrdCap;
    scores[static_cast<std::size_t>(i)] = lrd_sum / count / lrd_q;
  }
  return scores;
}

std::vector<double> lof_score(const Matrix& points, int k) {
  const int n = static_cast<int>(points.rows());
  if (k >= n) throw KTooLarge("k must be < n");
  std::vector<int> all(static_cast<std::size_t>(n));
  std::iota(all.begin(), all.end(), 0);
  return lof_score_against(points, all, k);
}

}  // namespace loganom
