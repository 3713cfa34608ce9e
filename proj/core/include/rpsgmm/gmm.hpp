#ifndef RPSGMM_GMM_HPP
#define RPSGMM_GMM_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "rpsgmm/embedding.hpp"

namespace rpsgmm {

/// Fit metadata recorded on every trained mixture.
struct FitMeta {
  double final_log_likelihood = 0.0;
  int iterations = 0;
  std::uint64_t seed = 0;
  double regularization = 0.0;
};

/// An M-component Gaussian mixture with full covariances.
struct GmmModel {
  Eigen::VectorXd weights;                  // simplex of length M
  std::vector<Eigen::VectorXd> means;       // M x dim
  std::vector<Eigen::MatrixXd> covariances; // M x dim x dim, SPD
  FitMeta meta;

  int components() const { return static_cast<int>(weights.size()); }
  int dim() const { return means.empty() ? 0 : static_cast<int>(means[0].size()); }

  /// Checks weight normalization, covariance symmetry, and positive
  /// definiteness (Cholesky). Throws on violation.
  void validate() const;
};

struct FitConfig {
  int n_components = 10;
  int n_init = 10;      // k-means restarts
  int max_iter = 200;
  double tol = 1e-6;    // relative log-likelihood improvement
  double reg = -1.0;    // covariance ridge; < 0 selects the automatic scale
                        // 1e-6 * trace(global covariance) / dim
  std::uint64_t seed = 0;
};

/// Log of the multivariate normal density, via Cholesky factorization of
/// sigma. Throws NonPositiveDefiniteError if factorization fails.
double log_component_density(const Eigen::VectorXd& x,
                             const Eigen::VectorXd& mu,
                             const Eigen::MatrixXd& sigma);

/// log sum_i w_i N(x | mu_i, Sigma_i), max-shifted log-sum-exp.
double log_mixture_density(const Eigen::VectorXd& x, const GmmModel& model);

/// Sum of log_mixture_density over all rows of `points`.
double total_log_likelihood(const Eigen::MatrixXd& points,
                            const GmmModel& model);

/// Responsibilities: rows = points, columns = components; each row is a
/// probability vector. Computed in log space and normalized per row.
Eigen::MatrixXd e_step(const Eigen::MatrixXd& points, const GmmModel& model);

/// Parameter update from responsibilities: weights, responsibility-weighted
/// means, and biased responsibility-weighted covariances with `reg` added to
/// each diagonal. Components whose total responsibility falls below 1e-10 are
/// reported through `degenerate` when given.
GmmModel m_step(const Eigen::MatrixXd& points, const Eigen::MatrixXd& gamma,
                double reg, std::vector<int>* degenerate = nullptr);

struct KmeansResult {
  Eigen::MatrixXd centroids;    // k rows
  std::vector<int> assignment;  // one entry per point
  double inertia = 0.0;         // sum of squared distances to assigned centroid
};

/// k-means with k-means++ seeding and n_init restarts; returns the restart
/// with lowest inertia. Deterministic for a fixed seed.
KmeansResult kmeans(const Eigen::MatrixXd& points, int k, int n_init,
                    std::uint64_t seed);

/// Per-iteration EM trace, exposed for monotonicity checks.
struct EmTrace {
  std::vector<double> log_likelihoods;
};

/// Fits an M-component mixture by EM: means from the best k-means restart,
/// uniform weights, covariances from the global sample covariance plus the
/// ridge. Stops when the relative log-likelihood improvement drops below
/// config.tol or max_iter is reached.
GmmModel fit_em(const Eigen::MatrixXd& points, const FitConfig& config,
                EmTrace* trace = nullptr);

inline GmmModel fit_em(const PhaseSpace& ps, const FitConfig& config,
                       EmTrace* trace = nullptr) {
  return fit_em(ps.points, config, trace);
}

}  // namespace rpsgmm

#endif  // RPSGMM_GMM_HPP
