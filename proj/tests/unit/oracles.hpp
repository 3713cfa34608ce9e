// Naive long-double reference implementations used to cross-check the
// library's log-space computations. These deliberately take the direct
// route (matrix inverse, sum-then-log, ratio-of-densities) so they share no
// code path with the implementation under test.
#ifndef RPSGMM_TESTS_ORACLES_HPP
#define RPSGMM_TESTS_ORACLES_HPP

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "rpsgmm/gmm.hpp"
#include "rpsgmm/rng.hpp"

namespace oracles {

using LMatrix = std::vector<std::vector<long double>>;
using LVector = std::vector<long double>;

inline LVector to_lvec(const Eigen::VectorXd& v) {
  LVector out(static_cast<std::size_t>(v.size()));
  for (int i = 0; i < v.size(); ++i) out[static_cast<std::size_t>(i)] = v(i);
  return out;
}

inline LMatrix to_lmat(const Eigen::MatrixXd& m) {
  LMatrix out(static_cast<std::size_t>(m.rows()),
              LVector(static_cast<std::size_t>(m.cols())));
  for (int r = 0; r < m.rows(); ++r) {
    for (int c = 0; c < m.cols(); ++c) {
      out[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = m(r, c);
    }
  }
  return out;
}

/// Determinant and inverse by Gauss-Jordan elimination with partial
/// pivoting, all in long double.
inline long double det_and_inverse(LMatrix a, LMatrix* inv) {
  const std::size_t n = a.size();
  LMatrix id(n, LVector(n, 0.0L));
  for (std::size_t i = 0; i < n; ++i) id[i][i] = 1.0L;
  long double det = 1.0L;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::fabs((double)a[r][col]) > std::fabs((double)a[pivot][col])) {
        pivot = r;
      }
    }
    if (pivot != col) {
      std::swap(a[pivot], a[col]);
      std::swap(id[pivot], id[col]);
      det = -det;
    }
    det *= a[col][col];
    const long double p = a[col][col];
    for (std::size_t c = 0; c < n; ++c) {
      a[col][c] /= p;
      id[col][c] /= p;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const long double f = a[r][col];
      for (std::size_t c = 0; c < n; ++c) {
        a[r][c] -= f * a[col][c];
        id[r][c] -= f * id[col][c];
      }
    }
  }
  if (inv) *inv = id;
  return det;
}

inline long double log_gauss(const Eigen::VectorXd& x,
                             const Eigen::VectorXd& mu,
                             const Eigen::MatrixXd& sigma) {
  const std::size_t n = static_cast<std::size_t>(x.size());
  LMatrix inv;
  const long double det = det_and_inverse(to_lmat(sigma), &inv);
  LVector diff(n);
  for (std::size_t i = 0; i < n; ++i) diff[i] = x((int)i) - mu((int)i);
  long double quad = 0.0L;
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      quad += diff[r] * inv[r][c] * diff[c];
    }
  }
  const long double log2pi = 1.837877066409345483560659472811L;
  return -0.5L * ((long double)n * log2pi + std::log(det) + quad);
}

/// Sum-then-log mixture density (no log-sum-exp shift).
inline long double log_mixture(const Eigen::VectorXd& x,
                               const rpsgmm::GmmModel& model) {
  long double sum = 0.0L;
  for (int j = 0; j < model.components(); ++j) {
    sum += (long double)model.weights(j) *
           std::exp(log_gauss(x, model.means[j], model.covariances[j]));
  }
  return std::log(sum);
}

/// Responsibilities as a plain ratio of weighted densities.
inline Eigen::MatrixXd e_step(const Eigen::MatrixXd& points,
                              const rpsgmm::GmmModel& model) {
  const int n = (int)points.rows();
  const int m = model.components();
  Eigen::MatrixXd gamma(n, m);
  for (int i = 0; i < n; ++i) {
    LVector dens((std::size_t)m);
    long double total = 0.0L;
    for (int j = 0; j < m; ++j) {
      dens[(std::size_t)j] =
          (long double)model.weights(j) *
          std::exp(log_gauss(points.row(i).transpose(), model.means[j],
                             model.covariances[j]));
      total += dens[(std::size_t)j];
    }
    for (int j = 0; j < m; ++j) {
      gamma(i, j) = (double)(dens[(std::size_t)j] / total);
    }
  }
  return gamma;
}

/// Direct evaluation of the update formulas in long double.
inline rpsgmm::GmmModel m_step(const Eigen::MatrixXd& points,
                               const Eigen::MatrixXd& gamma, double reg) {
  const int n = (int)points.rows();
  const int m = (int)gamma.cols();
  const int dim = (int)points.cols();
  rpsgmm::GmmModel model;
  model.weights.resize(m);
  model.means.resize((std::size_t)m);
  model.covariances.resize((std::size_t)m);
  for (int j = 0; j < m; ++j) {
    long double nj = 0.0L;
    for (int i = 0; i < n; ++i) nj += (long double)gamma(i, j);
    model.weights(j) = (double)(nj / (long double)n);
    LVector mu((std::size_t)dim, 0.0L);
    for (int i = 0; i < n; ++i) {
      for (int c = 0; c < dim; ++c) {
        mu[(std::size_t)c] += (long double)gamma(i, j) * points(i, c);
      }
    }
    for (auto& v : mu) v /= nj;
    LMatrix cov((std::size_t)dim, LVector((std::size_t)dim, 0.0L));
    for (int i = 0; i < n; ++i) {
      for (int r = 0; r < dim; ++r) {
        for (int c = 0; c < dim; ++c) {
          cov[(std::size_t)r][(std::size_t)c] +=
              (long double)gamma(i, j) *
              (points(i, r) - mu[(std::size_t)r]) *
              (points(i, c) - mu[(std::size_t)c]);
        }
      }
    }
    model.means[(std::size_t)j].resize(dim);
    model.covariances[(std::size_t)j].resize(dim, dim);
    for (int r = 0; r < dim; ++r) {
      model.means[(std::size_t)j](r) = (double)mu[(std::size_t)r];
      for (int c = 0; c < dim; ++c) {
        long double v = cov[(std::size_t)r][(std::size_t)c] / nj;
        if (r == c) v += reg;
        model.covariances[(std::size_t)j](r, c) = (double)v;
      }
    }
  }
  return model;
}

/// Product-of-densities sequence likelihood, then one log.
inline long double sequence_log_likelihood(const Eigen::MatrixXd& points,
                                           const rpsgmm::GmmModel& model) {
  long double product = 1.0L;
  for (int i = 0; i < points.rows(); ++i) {
    long double mix = 0.0L;
    for (int j = 0; j < model.components(); ++j) {
      mix += (long double)model.weights(j) *
             std::exp(log_gauss(points.row(i).transpose(), model.means[j],
                                model.covariances[j]));
    }
    product *= mix;
  }
  return std::log(product);
}

// --------------------------------------------------------------------------
// Random instance generators shared by the oracle tests.

inline Eigen::MatrixXd random_spd(int dim, rpsgmm::Rng& rng) {
  Eigen::MatrixXd a(dim, dim);
  for (int r = 0; r < dim; ++r) {
    for (int c = 0; c < dim; ++c) a(r, c) = rng.next_gaussian();
  }
  return a * a.transpose() + Eigen::MatrixXd::Identity(dim, dim);
}

inline Eigen::VectorXd random_vec(int dim, rpsgmm::Rng& rng) {
  Eigen::VectorXd v(dim);
  for (int i = 0; i < dim; ++i) v(i) = rng.next_gaussian();
  return v;
}

inline Eigen::MatrixXd random_points(int n, int dim, rpsgmm::Rng& rng) {
  Eigen::MatrixXd p(n, dim);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < dim; ++c) p(r, c) = rng.next_gaussian();
  }
  return p;
}

inline rpsgmm::GmmModel random_model(int m, int dim, rpsgmm::Rng& rng) {
  rpsgmm::GmmModel model;
  model.weights.resize(m);
  for (int j = 0; j < m; ++j) model.weights(j) = 0.1 + rng.next_double();
  model.weights /= model.weights.sum();
  for (int j = 0; j < m; ++j) {
    model.means.push_back(2.0 * random_vec(dim, rng));
    model.covariances.push_back(random_spd(dim, rng));
  }
  return model;
}

}  // namespace oracles

#endif  // RPSGMM_TESTS_ORACLES_HPP
