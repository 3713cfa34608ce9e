#ifndef RPSGMM_EMBEDDING_HPP
#define RPSGMM_EMBEDDING_HPP

#include <Eigen/Dense>

#include "rpsgmm/types.hpp"

namespace rpsgmm {

/// Time-delay embedding parameters. Grid search restricts both to [2, 30];
/// direct use only requires tau >= 1 and dim >= 1.
struct EmbeddingParams {
  int tau = 2;
  int dim = 2;
};

/// The reconstructed phase space of a series: one row per delay vector.
struct PhaseSpace {
  Eigen::MatrixXd points;
  int point_dim = 0;
  int source_len = 0;

  int size() const { return static_cast<int>(points.rows()); }
};

/// Number of delay vectors a series of length n yields: n - (dim-1)*tau.
int embedded_rows(int n, const EmbeddingParams& params);

/// Delay-embeds a value matrix (rows = samples, cols = channels). For each
/// valid sample index n the row holds, per channel in column order, the
/// segment [x_n, x_{n-tau}, ..., x_{n-(dim-1)tau}] (current sample first).
/// Throws SeriesTooShortError when n <= (dim-1)*tau.
PhaseSpace embed(const Eigen::MatrixXd& values, const EmbeddingParams& params);

PhaseSpace embed(const TimeSeries& series, const EmbeddingParams& params);

}  // namespace rpsgmm

#endif  // RPSGMM_EMBEDDING_HPP
