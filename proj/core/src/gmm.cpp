#include "rpsgmm/gmm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rpsgmm/errors.hpp"
#include "rpsgmm/rng.hpp"

namespace rpsgmm {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;
constexpr double kDegenerateResponsibility = 1e-10;
constexpr int kMaxDegenerateResets = 3;

Eigen::MatrixXd sample_covariance(const Eigen::MatrixXd& points) {
  const Eigen::RowVectorXd mean = points.colwise().mean();
  const Eigen::MatrixXd centered = points.rowwise() - mean;
  return centered.transpose() * centered /
         static_cast<double>(points.rows());
}

double automatic_ridge(const Eigen::MatrixXd& points) {
  const Eigen::MatrixXd cov = sample_covariance(points);
  return 1e-6 * cov.trace() / static_cast<double>(points.cols());
}

/// Per-point log densities of every component, plus log weights.
Eigen::MatrixXd weighted_log_densities(const Eigen::MatrixXd& points,
                                       const GmmModel& model) {
  const int n = static_cast<int>(points.rows());
  const int m = model.components();
  Eigen::MatrixXd out(n, m);
  for (int j = 0; j < m; ++j) {
    const Eigen::MatrixXd& sigma = model.covariances[j];
    Eigen::LLT<Eigen::MatrixXd> llt(sigma);
    if (llt.info() != Eigen::Success) {
      throw NonPositiveDefiniteError(
          "covariance of component " + std::to_string(j) +
          " is not positive definite");
    }
    const double log_det =
        2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
    const double log_w = std::log(model.weights(j));
    const double base =
        -0.5 * (static_cast<double>(points.cols()) * kLog2Pi + log_det);
    for (int i = 0; i < n; ++i) {
      const Eigen::VectorXd diff =
          points.row(i).transpose() - model.means[j];
      const Eigen::VectorXd z = llt.matrixL().solve(diff);
      out(i, j) = log_w + base - 0.5 * z.squaredNorm();
    }
  }
  return out;
}

double log_sum_exp_row(const Eigen::RowVectorXd& row) {
  const double mx = row.maxCoeff();
  if (!std::isfinite(mx)) return mx;
  return mx + std::log((row.array() - mx).exp().sum());
}

}  // namespace

void GmmModel::validate() const {
  const int m = components();
  if (m < 1) throw DomainError("GmmModel: no components");
  if (weights.minCoeff() < 0.0) {
    throw DomainError("GmmModel: negative weight");
  }
  if (std::abs(weights.sum() - 1.0) > 1e-12) {
    throw DomainError("GmmModel: weights do not sum to 1");
  }
  for (int j = 0; j < m; ++j) {
    const Eigen::MatrixXd& s = covariances[j];
    if ((s - s.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
      throw DomainError("GmmModel: covariance " + std::to_string(j) +
                        " not symmetric");
    }
    Eigen::LLT<Eigen::MatrixXd> llt(s);
    if (llt.info() != Eigen::Success) {
      throw NonPositiveDefiniteError("GmmModel: covariance " +
                                     std::to_string(j) +
                                     " not positive definite");
    }
  }
}

double log_component_density(const Eigen::VectorXd& x,
                             const Eigen::VectorXd& mu,
                             const Eigen::MatrixXd& sigma) {
  if (x.size() != mu.size() || sigma.rows() != x.size() ||
      sigma.cols() != x.size()) {
    throw DomainError("log_component_density: dimension mismatch");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(sigma);
  if (llt.info() != Eigen::Success) {
    throw NonPositiveDefiniteError(
        "log_component_density: covariance not positive definite");
  }
  const double log_det =
      2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
  const Eigen::VectorXd z = llt.matrixL().solve(x - mu);
  return -0.5 * (static_cast<double>(x.size()) * kLog2Pi + log_det +
                 z.squaredNorm());
}

double log_mixture_density(const Eigen::VectorXd& x, const GmmModel& model) {
  Eigen::RowVectorXd terms(model.components());
  for (int j = 0; j < model.components(); ++j) {
    terms(j) = std::log(model.weights(j)) +
               log_component_density(x, model.means[j], model.covariances[j]);
  }
  return log_sum_exp_row(terms);
}

double total_log_likelihood(const Eigen::MatrixXd& points,
                            const GmmModel& model) {
  const Eigen::MatrixXd wld = weighted_log_densities(points, model);
  double total = 0.0;
  for (int i = 0; i < wld.rows(); ++i) total += log_sum_exp_row(wld.row(i));
  return total;
}

Eigen::MatrixXd e_step(const Eigen::MatrixXd& points, const GmmModel& model) {
  Eigen::MatrixXd gamma = weighted_log_densities(points, model);
  for (int i = 0; i < gamma.rows(); ++i) {
    const double lse = log_sum_exp_row(gamma.row(i));
    gamma.row(i) = (gamma.row(i).array() - lse).exp();
    gamma.row(i) /= gamma.row(i).sum();  // absorb rounding into the row
  }
  return gamma;
}

GmmModel m_step(const Eigen::MatrixXd& points, const Eigen::MatrixXd& gamma,
                double reg, std::vector<int>* degenerate) {
  const int n = static_cast<int>(points.rows());
  const int m = static_cast<int>(gamma.cols());
  const int dim = static_cast<int>(points.cols());
  if (gamma.rows() != n) {
    throw DomainError("m_step: responsibility rows != point count");
  }

  GmmModel model;
  model.weights.resize(m);
  model.means.resize(m);
  model.covariances.resize(m);

  const Eigen::VectorXd totals = gamma.colwise().sum();
  for (int j = 0; j < m; ++j) {
    const double nj = totals(j);
    if (nj < kDegenerateResponsibility) {
      if (degenerate) degenerate->push_back(j);
      // Keep placeholder statistics; the caller resets this component.
      model.weights(j) = nj / static_cast<double>(n);
      model.means[j] = points.colwise().mean().transpose();
      model.covariances[j] =
          sample_covariance(points) +
          reg * Eigen::MatrixXd::Identity(dim, dim);
      continue;
    }
    model.weights(j) = nj / static_cast<double>(n);
    Eigen::VectorXd mu = Eigen::VectorXd::Zero(dim);
    for (int i = 0; i < n; ++i) {
      mu += gamma(i, j) * points.row(i).transpose();
    }
    mu /= nj;
    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(dim, dim);
    for (int i = 0; i < n; ++i) {
      const Eigen::VectorXd diff = points.row(i).transpose() - mu;
      cov.noalias() += gamma(i, j) * (diff * diff.transpose());
    }
    cov /= nj;
    cov = 0.5 * (cov + cov.transpose());  // enforce exact symmetry
    cov.diagonal().array() += reg;
    model.means[j] = std::move(mu);
    model.covariances[j] = std::move(cov);
  }
  model.weights /= model.weights.sum();
  return model;
}

namespace {

double squared_distance(const Eigen::MatrixXd& points, int i,
                        const Eigen::MatrixXd& centroids, int j) {
  return (points.row(i) - centroids.row(j)).squaredNorm();
}

KmeansResult kmeans_single(const Eigen::MatrixXd& points, int k, Rng& rng) {
  const int n = static_cast<int>(points.rows());
  const int dim = static_cast<int>(points.cols());

  // k-means++ seeding.
  Eigen::MatrixXd centroids(k, dim);
  centroids.row(0) =
      points.row(static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n))));
  Eigen::VectorXd d2(n);
  for (int i = 0; i < n; ++i) d2(i) = squared_distance(points, i, centroids, 0);
  for (int j = 1; j < k; ++j) {
    const double total = d2.sum();
    int pick;
    if (total <= 0.0) {
      pick = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n)));
    } else {
      double r = rng.next_double() * total;
      pick = n - 1;
      for (int i = 0; i < n; ++i) {
        r -= d2(i);
        if (r <= 0.0) {
          pick = i;
          break;
        }
      }
    }
    centroids.row(j) = points.row(pick);
    for (int i = 0; i < n; ++i) {
      d2(i) = std::min(d2(i), squared_distance(points, i, centroids, j));
    }
  }

  // Lloyd iterations.
  std::vector<int> assignment(n, -1);
  for (int iter = 0; iter < 300; ++iter) {
    bool changed = false;
    for (int i = 0; i < n; ++i) {
      int best = 0;
      double best_d = squared_distance(points, i, centroids, 0);
      for (int j = 1; j < k; ++j) {
        const double d = squared_distance(points, i, centroids, j);
        if (d < best_d) {
          best_d = d;
          best = j;
        }
      }
      if (assignment[i] != best) {
        assignment[i] = best;
        changed = true;
      }
    }
    if (!changed) break;

    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, dim);
    std::vector<int> counts(k, 0);
    for (int i = 0; i < n; ++i) {
      sums.row(assignment[i]) += points.row(i);
      ++counts[assignment[i]];
    }
    for (int j = 0; j < k; ++j) {
      if (counts[j] > 0) {
        centroids.row(j) = sums.row(j) / static_cast<double>(counts[j]);
      } else {
        // Empty cluster: restart it at the point farthest from its centroid.
        int farthest = 0;
        double worst = -1.0;
        for (int i = 0; i < n; ++i) {
          const double d =
              squared_distance(points, i, centroids, assignment[i]);
          if (d > worst) {
            worst = d;
            farthest = i;
          }
        }
        centroids.row(j) = points.row(farthest);
      }
    }
  }

  KmeansResult result;
  result.centroids = std::move(centroids);
  result.assignment = std::move(assignment);
  result.inertia = 0.0;
  for (int i = 0; i < n; ++i) {
    result.inertia +=
        squared_distance(points, i, result.centroids, result.assignment[i]);
  }
  return result;
}

}  // namespace

KmeansResult kmeans(const Eigen::MatrixXd& points, int k, int n_init,
                    std::uint64_t seed) {
  if (k < 1 || n_init < 1) {
    throw DomainError("kmeans: k and n_init must be >= 1");
  }
  if (points.rows() < k) {
    throw InsufficientDataError(
        "kmeans: " + std::to_string(points.rows()) + " points for k=" +
        std::to_string(k));
  }
  KmeansResult best;
  best.inertia = std::numeric_limits<double>::infinity();
  for (int r = 0; r < n_init; ++r) {
    Rng rng(Rng::derive(seed, {static_cast<std::uint64_t>(r)}));
    KmeansResult cur = kmeans_single(points, k, rng);
    if (cur.inertia < best.inertia) best = std::move(cur);
  }
  return best;
}

GmmModel fit_em(const Eigen::MatrixXd& points, const FitConfig& config,
                EmTrace* trace) {
  if (config.n_components < 1) {
    throw DomainError("fit_em: n_components must be >= 1");
  }
  if (points.rows() < config.n_components) {
    throw InsufficientDataError(
        "fit_em: " + std::to_string(points.rows()) + " points for " +
        std::to_string(config.n_components) + " components");
  }
  if (config.tol <= 0.0) throw DomainError("fit_em: tol must be positive");

  const int m = config.n_components;
  const int dim = static_cast<int>(points.cols());
  const double reg = config.reg >= 0.0 ? config.reg : automatic_ridge(points);

  const KmeansResult init = kmeans(points, m, config.n_init, config.seed);
  const Eigen::MatrixXd global_cov =
      sample_covariance(points) + reg * Eigen::MatrixXd::Identity(dim, dim);

  GmmModel model;
  model.weights = Eigen::VectorXd::Constant(m, 1.0 / static_cast<double>(m));
  model.means.resize(m);
  model.covariances.resize(m);
  for (int j = 0; j < m; ++j) {
    model.means[j] = init.centroids.row(j).transpose();
    model.covariances[j] = global_cov;
  }

  double prev_ll = total_log_likelihood(points, model);
  if (trace) trace->log_likelihoods.push_back(prev_ll);

  int resets = 0;
  int iter = 0;
  for (; iter < config.max_iter; ++iter) {
    const Eigen::MatrixXd gamma = e_step(points, model);
    std::vector<int> degenerate;
    GmmModel updated = m_step(points, gamma, reg, &degenerate);

    if (!degenerate.empty()) {
      if (++resets > kMaxDegenerateResets) {
        throw DegenerateFitError(
            "fit_em: component stayed degenerate after " +
            std::to_string(kMaxDegenerateResets) + " resets");
      }
      // Reset each dead component at the point the mixture explains worst.
      for (int j : degenerate) {
        int worst = 0;
        double worst_ld = std::numeric_limits<double>::infinity();
        for (int i = 0; i < points.rows(); ++i) {
          const double ld =
              log_mixture_density(points.row(i).transpose(), updated);
          if (ld < worst_ld) {
            worst_ld = ld;
            worst = static_cast<int>(i);
          }
        }
        updated.means[j] = points.row(worst).transpose();
        updated.covariances[j] = global_cov;
        updated.weights(j) = 1.0 / static_cast<double>(m);
      }
      updated.weights /= updated.weights.sum();
      model = std::move(updated);
      prev_ll = total_log_likelihood(points, model);
      if (trace) trace->log_likelihoods.push_back(prev_ll);
      continue;  // a reset restarts the convergence check
    }

    model = std::move(updated);
    const double ll = total_log_likelihood(points, model);
    if (trace) trace->log_likelihoods.push_back(ll);
    const double denom = std::max(std::abs(prev_ll), 1e-300);
    if (std::abs(ll - prev_ll) / denom < config.tol) {
      prev_ll = ll;
      ++iter;
      break;
    }
    prev_ll = ll;
  }

  model.meta.final_log_likelihood = prev_ll;
  model.meta.iterations = iter;
  model.meta.seed = config.seed;
  model.meta.regularization = reg;
  return model;
}

}  // namespace rpsgmm
