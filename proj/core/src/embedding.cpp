#include "rpsgmm/embedding.hpp"

#include "rpsgmm/errors.hpp"

namespace rpsgmm {

int embedded_rows(int n, const EmbeddingParams& params) {
  return n - (params.dim - 1) * params.tau;
}

PhaseSpace embed(const Eigen::MatrixXd& values,
                 const EmbeddingParams& params) {
  if (params.tau < 1 || params.dim < 1) {
    throw DomainError("embed: tau and dim must be >= 1");
  }
  const int n = static_cast<int>(values.rows());
  const int n_channels = static_cast<int>(values.cols());
  const int rows = embedded_rows(n, params);
  const int min_len = (params.dim - 1) * params.tau + 1;
  if (rows < 1) {
    throw SeriesTooShortError(
        "embed: series length " + std::to_string(n) +
            " too short for tau=" + std::to_string(params.tau) +
            ", dim=" + std::to_string(params.dim) + "; need at least " +
            std::to_string(min_len) + " samples",
        min_len);
  }

  PhaseSpace ps;
  ps.source_len = n;
  ps.point_dim = n_channels * params.dim;
  ps.points.resize(rows, ps.point_dim);

  const int offset = (params.dim - 1) * params.tau;
  for (int r = 0; r < rows; ++r) {
    const int t = offset + r;
    for (int c = 0; c < n_channels; ++c) {
      for (int j = 0; j < params.dim; ++j) {
        ps.points(r, c * params.dim + j) = values(t - j * params.tau, c);
      }
    }
  }
  return ps;
}

PhaseSpace embed(const TimeSeries& series, const EmbeddingParams& params) {
  return embed(series.values, params);
}

}  // namespace rpsgmm
