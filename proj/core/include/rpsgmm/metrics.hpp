#ifndef RPSGMM_METRICS_HPP
#define RPSGMM_METRICS_HPP

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "rpsgmm/classifier.hpp"
#include "rpsgmm/types.hpp"

namespace rpsgmm {

/// Confusion matrix (rows = true class, columns = predicted) with accuracy
/// and per-class plus support-weighted precision/recall/F1.
struct EvalReport {
  std::vector<std::string> labels;
  Eigen::MatrixXi confusion;
  double accuracy = 0.0;
  std::vector<double> precision;
  std::vector<double> recall;
  std::vector<double> f1;
  double weighted_precision = 0.0;
  double weighted_recall = 0.0;
  double weighted_f1 = 0.0;

  int total() const { return confusion.sum(); }
};

/// Derives all metrics from a confusion matrix. Per-class precision/recall
/// with an empty denominator are 0; weights are true-class supports.
EvalReport report_from_confusion(const std::vector<std::string>& labels,
                                 const Eigen::MatrixXi& confusion);

/// Classifies every labeled series in `data` and tabulates the result.
/// Throws DomainError on an unlabeled series.
EvalReport evaluate(const ClassifierBundle& bundle, const Dataset& data);

std::string report_to_json(const EvalReport& report);

}  // namespace rpsgmm

#endif  // RPSGMM_METRICS_HPP
