#include "rpsgmm/metrics.hpp"

#include <algorithm>

#include "rpsgmm/errors.hpp"

#include "json.hpp"

namespace rpsgmm {

EvalReport report_from_confusion(const std::vector<std::string>& labels,
                                 const Eigen::MatrixXi& confusion) {
  const int k = static_cast<int>(labels.size());
  if (confusion.rows() != k || confusion.cols() != k) {
    throw DomainError("report_from_confusion: matrix/label size mismatch");
  }
  if (confusion.minCoeff() < 0) {
    throw DomainError("report_from_confusion: negative count");
  }

  EvalReport report;
  report.labels = labels;
  report.confusion = confusion;

  const double total = confusion.sum();
  if (total <= 0) throw DomainError("report_from_confusion: empty matrix");
  report.accuracy = confusion.diagonal().sum() / total;

  report.precision.resize(k);
  report.recall.resize(k);
  report.f1.resize(k);
  for (int c = 0; c < k; ++c) {
    const double tp = confusion(c, c);
    const double pred = confusion.col(c).sum();
    const double support = confusion.row(c).sum();
    report.precision[c] = pred > 0 ? tp / pred : 0.0;
    report.recall[c] = support > 0 ? tp / support : 0.0;
    const double pr = report.precision[c] + report.recall[c];
    report.f1[c] = pr > 0 ? 2.0 * report.precision[c] * report.recall[c] / pr
                          : 0.0;
    const double w = support / total;
    report.weighted_precision += w * report.precision[c];
    report.weighted_recall += w * report.recall[c];
    report.weighted_f1 += w * report.f1[c];
  }
  return report;
}

EvalReport evaluate(const ClassifierBundle& bundle, const Dataset& data) {
  std::vector<std::string> labels = bundle.class_order;
  auto label_index = [&](const std::string& l) {
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] == l) return static_cast<int>(i);
    }
    throw DomainError("evaluate: label '" + l +
                      "' is not covered by the bundle");
  };

  Eigen::MatrixXi confusion = Eigen::MatrixXi::Zero(
      static_cast<int>(labels.size()), static_cast<int>(labels.size()));
  for (const auto& s : data.series) {
    if (!s.label) {
      throw DomainError("evaluate: unlabeled series '" + s.id + "'");
    }
    const int truth = label_index(*s.label);
    const int pred = label_index(classify(s, bundle).label);
    ++confusion(truth, pred);
  }
  return report_from_confusion(labels, confusion);
}

std::string report_to_json(const EvalReport& report) {
  nlohmann::json j;
  j["labels"] = report.labels;
  j["accuracy"] = report.accuracy;
  j["total"] = report.total();
  for (int r = 0; r < report.confusion.rows(); ++r) {
    std::vector<int> row;
    for (int c = 0; c < report.confusion.cols(); ++c) {
      row.push_back(report.confusion(r, c));
    }
    j["confusion"].push_back(row);
  }
  for (std::size_t c = 0; c < report.labels.size(); ++c) {
    nlohmann::json per;
    per["precision"] = report.precision[c];
    per["recall"] = report.recall[c];
    per["f1"] = report.f1[c];
    j["per_class"][report.labels[c]] = per;
  }
  j["weighted"]["precision"] = report.weighted_precision;
  j["weighted"]["recall"] = report.weighted_recall;
  j["weighted"]["f1"] = report.weighted_f1;
  return j.dump(2) + "\n";
}

}  // namespace rpsgmm
