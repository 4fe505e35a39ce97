#include <cmath>
#include <limits>

#include "loganom/detectors.hpp"
#include "loganom/errors.hpp"

namespace loganom {
namespace {

constexpr double kAlphaEps = 1e-12;

double rbf(const Eigen::RowVectorXd& a, const Eigen::RowVectorXd& b, double gamma) {
  return std::exp(-gamma * (a - b).squaredNorm());
}

double auto_gamma(const Matrix& points) {
  const Eigen::Index n = points.rows(), d = points.cols();
  double total_var = 0.0;
  for (Eigen::Index j = 0; j < d; ++j) {
    const double mean = points.col(j).mean();
    total_var += (points.col(j).array() - mean).square().sum() / static_cast<double>(n);
  }
  const double mean_var = total_var / static_cast<double>(d);
  if (mean_var <= 0.0)
    throw BadGamma("auto gamma undefined: zero variance in every column");
  return 1.0 / (static_cast<double>(d) * mean_var);
}

}  // namespace

OneClassSvm OneClassSvm::fit(const Matrix& points, const OcsvmParams& params) {
  const Eigen::Index n = points.rows();
  if (n < 2) throw ConfigInvalid("one-class SVM needs at least 2 points");
  if (!(params.nu > 0.0 && params.nu <= 1.0))
    throw ConfigInvalid("nu must be in (0, 1]");
  if (params.gamma == 0.0 || (params.gamma > 0.0 && !std::isfinite(params.gamma)))
    throw BadGamma("gamma must be positive and finite");

  const double gamma = params.gamma > 0.0 ? params.gamma : auto_gamma(points);
  const double cap = 1.0 / (params.nu * static_cast<double>(n));
  const long long max_iter =
      params.max_iter >= 0 ? params.max_iter : 100000LL * static_cast<long long>(n);

  Matrix kernel(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    kernel(i, i) = 1.0;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double v = rbf(points.row(i), points.row(j), gamma);
      kernel(i, j) = v;
      kernel(j, i) = v;
    }
  }

  // Feasible start: the first floor(nu*n) points at the box cap, the
  // remainder on one more point, so sum(alpha) = 1 from the outset.
  Eigen::VectorXd alpha = Eigen::VectorXd::Zero(n);
  {
    const auto full = static_cast<Eigen::Index>(params.nu * static_cast<double>(n));
    for (Eigen::Index i = 0; i < full && i < n; ++i) alpha(i) = cap;
    const double rest = 1.0 - cap * static_cast<double>(std::min(full, n));
    if (rest > 0.0 && full < n) alpha(full) = rest;
  }

  Eigen::VectorXd grad = kernel * alpha;

  // Pairwise coordinate descent on the equality-constrained dual: move mass
  // from the most-above-average gradient (with alpha > 0) to the
  // most-below-average one (with alpha < cap) until the KKT gap closes.
  bool converged = false;
  for (long long iter = 0; iter < max_iter; ++iter) {
    Eigen::Index up = -1, down = -1;
    double g_min = std::numeric_limits<double>::infinity();
    double g_max = -std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < n; ++i) {
      if (alpha(i) < cap - kAlphaEps && grad(i) < g_min) {
        g_min = grad(i);
        up = i;
      }
      if (alpha(i) > kAlphaEps && grad(i) > g_max) {
        g_max = grad(i);
        down = i;
      }
    }
    if (up < 0 || down < 0 || g_max - g_min < params.tol) {
      converged = true;
      break;
    }
    const double curvature =
        std::max(kernel(up, up) + kernel(down, down) - 2.0 * kernel(up, down), 1e-12);
    const double step = std::min({(g_max - g_min) / curvature, alpha(down),
                                  cap - alpha(up)});
    alpha(up) += step;
    alpha(down) -= step;
    grad += step * (kernel.col(up) - kernel.col(down));
  }

  // rho from the free support vectors; fall back to the KKT interval middle
  // when every alpha sits on the box.
  double rho;
  {
    double free_sum = 0.0;
    int free_count = 0;
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < n; ++i) {
      if (alpha(i) > kAlphaEps && alpha(i) < cap - kAlphaEps) {
        free_sum += grad(i);
        ++free_count;
      } else if (alpha(i) <= kAlphaEps) {
        hi = std::min(hi, grad(i));
      } else {
        lo = std::max(lo, grad(i));
      }
    }
    if (free_count > 0) {
      rho = free_sum / free_count;
    } else {
      if (!std::isfinite(lo)) lo = hi;
      if (!std::isfinite(hi)) hi = lo;
      rho = 0.5 * (lo + hi);
    }
  }

  OneClassSvm model;
  model.gamma_ = gamma;
  model.rho_ = rho;
  model.converged_ = converged;
  int errors = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (grad(i) < rho - params.tol) ++errors;  // strictly inside the error margin
    if (alpha(i) > kAlphaEps) {
      model.alphas_.push_back(alpha(i));
    }
  }
  model.support_points_.resize(static_cast<Eigen::Index>(model.alphas_.size()),
                               points.cols());
  Eigen::Index row = 0;
  for (Eigen::Index i = 0; i < n; ++i)
    if (alpha(i) > kAlphaEps) model.support_points_.row(row++) = points.row(i);
  model.margin_error_fraction_ = static_cast<double>(errors) / static_cast<double>(n);
  return model;
}

std::vector<double> OneClassSvm::score(const Matrix& points) const {
  std::vector<double> scores(static_cast<std::size_t>(points.rows()));
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    double decision = 0.0;
    for (Eigen::Index j = 0; j < support_points_.rows(); ++j) {
      decision += alphas_[static_cast<std::size_t>(j)] *
                  rbf(support_points_.row(j), points.row(i), gamma_);
    }
    scores[static_cast<std::size_t>(i)] = rho_ - decision;
  }
  return scores;
}

std::size_t OneClassSvm::support_vector_count() const { return alphas_.size(); }

}  // namespace loganom
