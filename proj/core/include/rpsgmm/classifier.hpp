#ifndef RPSGMM_CLASSIFIER_HPP
#define RPSGMM_CLASSIFIER_HPP

#include <map>
#include <string>
#include <vector>

#include "rpsgmm/embedding.hpp"
#include "rpsgmm/gmm.hpp"
#include "rpsgmm/types.hpp"

namespace rpsgmm {

/// One trained GMM per class, sharing a single (tau, dim) pair. class_order
/// is the deterministic tie-break order for classification.
struct ClassifierBundle {
  EmbeddingParams params;
  std::vector<std::string> class_order;
  std::map<std::string, GmmModel> models;
  std::vector<std::string> channel_schema;

  void validate() const;
};

/// Trains one mixture per class on the phase space of that class's single
/// representative series. Each fit owns an RNG seeded from
/// (config.seed, class index, tau, dim).
ClassifierBundle train(const std::map<std::string, TimeSeries>& representatives,
                       const EmbeddingParams& params, const FitConfig& config);

/// Sum over embedded points of the log mixture density (the log of the
/// product-of-densities sequence likelihood).
double sequence_log_likelihood(const TimeSeries& series, const GmmModel& model,
                               const EmbeddingParams& params);

struct Classification {
  std::string label;
  std::map<std::string, double> scores;  // per-class log-likelihood
};

/// Maximum-likelihood class assignment; ties go to the earliest class in
/// class_order.
Classification classify(const TimeSeries& series,
                        const ClassifierBundle& bundle);

struct GridCell {
  int tau = 0;
  int dim = 0;
  bool skipped = false;
  double accuracy = 0.0;
  double seconds = 0.0;
};

struct GridSearchResult {
  std::vector<GridCell> table;  // row-major over (tau, dim), tau outer
  int best_tau = 0;
  int best_dim = 0;
  double best_accuracy = 0.0;
};

/// Evaluates every (tau, dim) in [lo, hi]^2: trains on the representatives,
/// classifies every eval series, records accuracy. Cells where a
/// representative is too short to embed are marked skipped. The best cell has
/// maximum accuracy; ties prefer smaller dim, then smaller tau. `workers`
/// sets the thread-pool size; results are merged by cell index so the table
/// is identical for any worker count.
GridSearchResult grid_search(
    const std::map<std::string, TimeSeries>& representatives,
    const Dataset& eval_set, int lo, int hi, const FitConfig& config,
    int workers = 1);

/// Grid table as CSV (`tau,d,accuracy,skipped,seconds`). Set
/// `include_timing` to false for byte-stable comparisons.
std::string grid_to_csv(const GridSearchResult& result,
                        bool include_timing = true);

/// Best-cell summary as JSON.
std::string grid_summary_json(const GridSearchResult& result,
                              std::uint64_t seed);

}  // namespace rpsgmm

#endif  // RPSGMM_CLASSIFIER_HPP
