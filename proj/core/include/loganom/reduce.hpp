#pragma once

#include <vector>

#include "loganom/features.hpp"

namespace loganom {

struct ReducedEmbedding {
  Matrix coords;                                // n x p
  std::vector<double> explained_variance_ratio; // p, non-increasing, in [0,1]
  Matrix basis;                                 // d x p, orthonormal columns
};

/// Project onto the top-p eigenvectors of the sample covariance of the
/// centered data. Sign convention: each basis column's largest-magnitude
/// entry is nonnegative (first such entry on ties), so runs are reproducible
/// bit-for-bit. Rank deficiency is not an error; trailing ratios may be 0.
/// Throws DimensionTooLarge if p > d, TooFewRows if n <= p.
ReducedEmbedding pca_fit(const FeatureMatrix& matrix, int p);

/// Same reduction via thin SVD of the centered matrix. Agrees with pca_fit
/// coordinates up to per-column sign within 1e-8 relative; the same sign
/// convention makes agreement exact in practice.
ReducedEmbedding svd_reduce(const FeatureMatrix& matrix, int p);

}  // namespace loganom
