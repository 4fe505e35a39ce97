#include <cmath>

#include "doctest.h"
#include "loganom/errors.hpp"
#include "loganom/reduce.hpp"
#include "oracles.hpp"

using namespace loganom;

namespace {

FeatureMatrix wrap(const Matrix& values) {
  FeatureMatrix m;
  m.values = values;
  for (int j = 0; j < values.cols(); ++j)
    m.column_names.push_back("c" + std::to_string(j));
  return m;
}

}  // namespace

TEST_CASE("collinear data: the first component explains everything") {
  Matrix pts(50, 3);
  Rng rng = make_rng(11, "reduce/collinear");
  for (int i = 0; i < 50; ++i) {
    const double t = gaussian(rng);
    pts.row(i) << t, 2.0 * t, -t;
  }
  const ReducedEmbedding e = pca_fit(wrap(pts), 2);
  CHECK(e.explained_variance_ratio[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(e.explained_variance_ratio[1] == doctest::Approx(0.0).epsilon(1e-12));
  // All variation lives in the first coordinate.
  CHECK(e.coords.col(1).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("isotropic Gaussian: ratios near 1/3 each") {
  const Matrix pts = oracle::random_matrix(5000, 3, 21);
  const ReducedEmbedding e = pca_fit(wrap(pts), 3);
  for (double r : e.explained_variance_ratio)
    CHECK(r == doctest::Approx(1.0 / 3.0).epsilon(0.15));
}

TEST_CASE("dimension and row-count preconditions") {
  const Matrix pts = oracle::random_matrix(10, 2, 3);
  CHECK_THROWS_AS(pca_fit(wrap(pts), 3), DimensionTooLarge);
  CHECK_THROWS_AS(svd_reduce(wrap(pts), 3), DimensionTooLarge);
  const Matrix two = oracle::random_matrix(2, 4, 3);
  CHECK_THROWS_AS(pca_fit(wrap(two), 2), TooFewRows);
}

TEST_CASE("PCA and SVD agree; basis orthonormal; ratios sane") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const int n = 30 + static_cast<int>(seed) * 7;
    const int d = 4 + static_cast<int>(seed % 5);
    const Matrix pts = oracle::random_matrix(n, d, 100 + seed, 2.5);
    const int p = 2 + static_cast<int>(seed % 2);

    const ReducedEmbedding a = pca_fit(wrap(pts), p);
    const ReducedEmbedding b = svd_reduce(wrap(pts), p);
    CAPTURE(seed);

    CHECK((a.coords - b.coords).cwiseAbs().maxCoeff() < 1e-8);

    const Matrix gram = a.basis.transpose() * a.basis;
    CHECK((gram - Matrix::Identity(p, p)).cwiseAbs().maxCoeff() < 1e-10);

    double prev = 1.0 + 1e-12;
    double sum = 0.0;
    for (double r : a.explained_variance_ratio) {
      CHECK(r >= -1e-12);
      CHECK(r <= prev + 1e-12);  // non-increasing
      prev = r;
      sum += r;
    }
    CHECK(sum <= 1.0 + 1e-9);
  }
}

TEST_CASE("projection never increases pairwise distances") {
  const Matrix pts = oracle::random_matrix(40, 6, 77);
  const ReducedEmbedding e = pca_fit(wrap(pts), 3);
  const Matrix centered = pts.rowwise() - pts.colwise().mean();
  for (int i = 0; i < 40; ++i)
    for (int j = i + 1; j < 40; ++j) {
      const double full = (centered.row(i) - centered.row(j)).norm();
      const double red = (e.coords.row(i) - e.coords.row(j)).norm();
      CHECK(red <= full + 1e-9);
    }
}

TEST_CASE("reduction is deterministic, including signs") {
  const Matrix pts = oracle::random_matrix(60, 5, 9);
  const ReducedEmbedding a = pca_fit(wrap(pts), 2);
  const ReducedEmbedding b = pca_fit(wrap(pts), 2);
  CHECK((a.coords - b.coords).cwiseAbs().maxCoeff() == 0.0);
  // Sign convention: each basis column's largest-magnitude entry is >= 0.
  for (int c = 0; c < 2; ++c) {
    int arg = 0;
    a.basis.col(c).cwiseAbs().maxCoeff(&arg);
    CHECK(a.basis(arg, c) >= 0.0);
  }
}
