#include <cmath>
#include <numeric>

#include "loganom/detectors.hpp"
#include "loganom/errors.hpp"
#include "loganom/rng.hpp"

namespace loganom {
namespace {

constexpr double kEulerMascheroni = 0.5772156649015328606;

double harmonic_exact(std::size_t m) {
  double h = 0.0;
  for (std::size_t i = 1; i <= m; ++i) h += 1.0 / static_cast<double>(i);
  return h;
}

}  // namespace

double iforest_c(std::size_t m) {
  if (m <= 1) return 0.0;
  const std::size_t hm = m - 1;
  const double harmonic = hm <= 999  // exact branch covers c(m) for m <= 1000
                              ? harmonic_exact(hm)
                              : std::log(static_cast<double>(hm)) + kEulerMascheroni;
  return 2.0 * harmonic - 2.0 * static_cast<double>(hm) / static_cast<double>(m);
}

IsolationForest IsolationForest::fit(const Matrix& points, int n_trees,
                                     int subsample, std::uint64_t seed) {
  const int n = static_cast<int>(points.rows());
  const int d = static_cast<int>(points.cols());
  if (n_trees < 1) throw ConfigInvalid("need at least one tree");
  if (subsample < 2) throw ConfigInvalid("subsample must be >= 2");
  if (subsample > n) throw SubsampleTooLarge("subsample exceeds n");

  IsolationForest forest;
  forest.n_trees_ = n_trees;
  forest.subsample_ = subsample;
  forest.c_norm_ = iforest_c(static_cast<std::size_t>(subsample));
  forest.trees_.resize(static_cast<std::size_t>(n_trees));

  const int height_limit =
      static_cast<int>(std::ceil(std::log2(static_cast<double>(subsample))));
  Rng rng = make_rng(seed, "iforest");

  std::vector<int> pool(static_cast<std::size_t>(n));
  std::iota(pool.begin(), pool.end(), 0);

  for (auto& tree : forest.trees_) {
    // Subsample without replacement (partial Fisher-Yates).
    for (int i = 0; i < subsample; ++i) {
      const int j = i + static_cast<int>(uniform_int(rng, 0, n - 1 - i));
      std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
    }
    std::vector<int> rows(pool.begin(), pool.begin() + subsample);

    // Iterative growth with an explicit work stack; node indices are stable.
    struct Work {
      int node;
      std::vector<int> rows;
      int depth;
    };
    tree.nodes.clear();
    tree.nodes.push_back({});
    std::vector<Work> stack;
    stack.push_back({0, std::move(rows), 0});
    while (!stack.empty()) {
      Work w = std::move(stack.back());
      stack.pop_back();
      Node& node = tree.nodes[static_cast<std::size_t>(w.node)];
      node.size = static_cast<int>(w.rows.size());

      bool splittable = w.rows.size() > 1 && w.depth < height_limit;
      int feature = -1;
      double lo = 0.0, hi = 0.0;
      if (splittable) {
        // A uniformly random feature with spread; give up after d tries
        // (all-identical subsets terminate as leaves).
        for (int attempt = 0; attempt < d && feature < 0; ++attempt) {
          const int f = static_cast<int>(uniform_int(rng, 0, d - 1));
          lo = hi = points(w.rows[0], f);
          for (int r : w.rows) {
            lo = std::min(lo, points(r, f));
            hi = std::max(hi, points(r, f));
          }
          if (hi > lo) feature = f;
        }
        if (feature < 0) splittable = false;
      }
      if (!splittable) continue;  // leaf: feature stays -1

      const double split = uniform_real(rng, lo, hi);
      std::vector<int> left, right;
      for (int r : w.rows) (points(r, feature) < split ? left : right).push_back(r);
      if (left.empty() || right.empty()) continue;  // degenerate draw: leaf

      const int li = static_cast<int>(tree.nodes.size());
      tree.nodes.push_back({});
      const int ri = static_cast<int>(tree.nodes.size());
      tree.nodes.push_back({});
      // `node` reference may dangle after push_back; reindex.
      Node& parent = tree.nodes[static_cast<std::size_t>(w.node)];
      parent.feature = feature;
      parent.split = split;
      parent.left = li;
      parent.right = ri;
      stack.push_back({li, std::move(left), w.depth + 1});
      stack.push_back({ri, std::move(right), w.depth + 1});
    }
  }
  return forest;
}

double IsolationForest::path_length(const Tree& tree,
                                    const Eigen::RowVectorXd& x) const {
  int idx = 0;
  double depth = 0.0;
  while (tree.nodes[static_cast<std::size_t>(idx)].feature >= 0) {
    const Node& node = tree.nodes[static_cast<std::size_t>(idx)];
    idx = x(node.feature) < node.split ? node.left : node.right;
    depth += 1.0;
  }
  // Truncated leaves stand in for the subtree that was not grown.
  return depth + iforest_c(
                     static_cast<std::size_t>(tree.nodes[static_cast<std::size_t>(idx)].size));
}

double IsolationForest::mean_path_length(const Matrix& points) const {
  double total = 0.0;
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    double sum = 0.0;
    for (const auto& tree : trees_) sum += path_length(tree, points.row(i));
    total += sum / static_cast<double>(trees_.size());
  }
  return total / static_cast<double>(points.rows());
}

std::vector<double> IsolationForest::score(const Matrix& points) const {
  std::vector<double> scores(static_cast<std::size_t>(points.rows()));
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    double sum = 0.0;
    for (const auto& tree : trees_) sum += path_length(tree, points.row(i));
    const double mean_h = sum / static_cast<double>(trees_.size());
    scores[static_cast<std::size_t>(i)] = std::pow(2.0, -mean_h / c_norm_);
  }
  return scores;
}

}  // namespace loganom
