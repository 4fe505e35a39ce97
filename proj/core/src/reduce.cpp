#include "loganom/reduce.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cmath>

#include "loganom/errors.hpp"

namespace loganom {
namespace {

// Each basis column's largest-magnitude entry is made nonnegative (first
// such entry breaks ties), and coordinates follow.
void fix_signs(Matrix& basis, Matrix& coords) {
  for (Eigen::Index j = 0; j < basis.cols(); ++j) {
    Eigen::Index argmax = 0;
    double best = 0.0;
    for (Eigen::Index i = 0; i < basis.rows(); ++i) {
      const double mag = std::abs(basis(i, j));
      if (mag > best) {
        best = mag;
        argmax = i;
      }
    }
    if (basis(argmax, j) < 0.0) {
      basis.col(j) = -basis.col(j);
      coords.col(j) = -coords.col(j);
    }
  }
}

void check_dims(const FeatureMatrix& matrix, int p) {
  if (p != 2 && p != 3) throw ConfigInvalid("reduction dimension must be 2 or 3");
  if (p > matrix.cols())
    throw DimensionTooLarge("requested " + std::to_string(p) + " components from " +
                            std::to_string(matrix.cols()) + " columns");
  if (matrix.rows() <= p) throw TooFewRows("need n > p rows");
}

ReducedEmbedding assemble(const Matrix& centered, Matrix basis,
                          const Eigen::VectorXd& component_variances,
                          double total_variance, int p) {
  ReducedEmbedding out;
  out.coords = centered * basis;
  out.basis = std::move(basis);
  fix_signs(out.basis, out.coords);
  out.explained_variance_ratio.resize(static_cast<std::size_t>(p));
  for (int j = 0; j < p; ++j) {
    out.explained_variance_ratio[static_cast<std::size_t>(j)] =
        total_variance > 0.0 ? std::max(0.0, component_variances(j)) / total_variance
                             : 0.0;
  }
  return out;
}

}  // namespace

ReducedEmbedding pca_fit(const FeatureMatrix& matrix, int p) {
  check_dims(matrix, p);
  const Eigen::Index n = matrix.rows(), d = matrix.cols();
  const Matrix centered = matrix.values.rowwise() - matrix.values.colwise().mean();

  // Covariance eigendecomposition is cheapest at these widths; wide
  // matrices go through the SVD path, which satisfies the same contract.
  if (d > 64) return svd_reduce(matrix, p);

  const Matrix cov = centered.transpose() * centered / static_cast<double>(n - 1);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(cov);
  if (eig.info() != Eigen::Success)
    throw Error("eigendecomposition failed to converge");

  // Eigen returns ascending eigenvalues; take the top p in descending order.
  Matrix basis(d, p);
  Eigen::VectorXd component_variances(p);
  for (int j = 0; j < p; ++j) {
    basis.col(j) = eig.eigenvectors().col(d - 1 - j);
    component_variances(j) = eig.eigenvalues()(d - 1 - j);
  }
  return assemble(centered, std::move(basis), component_variances,
                  eig.eigenvalues().sum(), p);
}

ReducedEmbedding svd_reduce(const FeatureMatrix& matrix, int p) {
  check_dims(matrix, p);
  const Eigen::Index n = matrix.rows();
  const Matrix centered = matrix.values.rowwise() - matrix.values.colwise().mean();

  Eigen::BDCSVD<Matrix> svd(centered, Eigen::ComputeThinU | Eigen::ComputeThinV);
  Matrix basis = svd.matrixV().leftCols(p);
  Eigen::VectorXd component_variances(p);
  for (int j = 0; j < p; ++j) {
    const double s = svd.singularValues()(j);
    component_variances(j) = s * s / static_cast<double>(n - 1);
  }
  const double total =
      svd.singularValues().array().square().sum() / static_cast<double>(n - 1);
  return assemble(centered, std::move(basis), component_variances, total, p);
}

}  // namespace loganom
