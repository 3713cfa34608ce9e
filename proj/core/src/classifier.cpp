#include "rpsgmm/classifier.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "rpsgmm/errors.hpp"
#include "rpsgmm/rng.hpp"

#include "json.hpp"

namespace rpsgmm {

void ClassifierBundle::validate() const {
  if (class_order.size() < 2) {
    throw DomainError("ClassifierBundle: need at least 2 classes");
  }
  if (models.size() != class_order.size()) {
    throw DomainError("ClassifierBundle: class_order/model mismatch");
  }
  const int expected_dim =
      static_cast<int>(channel_schema.size()) * params.dim;
  for (const auto& label : class_order) {
    auto it = models.find(label);
    if (it == models.end()) {
      throw DomainError("ClassifierBundle: no model for class '" + label +
                        "'");
    }
    it->second.validate();
    if (it->second.dim() != expected_dim) {
      throw DomainError("ClassifierBundle: model for '" + label +
                        "' has dim " + std::to_string(it->second.dim()) +
                        ", expected " + std::to_string(expected_dim));
    }
  }
}

ClassifierBundle train(
    const std::map<std::string, TimeSeries>& representatives,
    const EmbeddingParams& params, const FitConfig& config) {
  if (representatives.size() < 2) {
    throw DomainError("train: need at least 2 classes");
  }
  ClassifierBundle bundle;
  bundle.params = params;

  std::uint64_t class_index = 0;
  for (const auto& [label, series] : representatives) {
    bundle.class_order.push_back(label);
    PhaseSpace ps;
    try {
      ps = embed(series, params);
    } catch (const SeriesTooShortError& e) {
      throw SeriesTooShortError(
          "train: representative for class '" + label + "': " + e.what(),
          e.required_length());
    }
    FitConfig fit_config = config;
    fit_config.seed = Rng::derive(
        config.seed, {class_index, static_cast<std::uint64_t>(params.tau),
                      static_cast<std::uint64_t>(params.dim)});
    try {
      bundle.models[label] = fit_em(ps, fit_config);
    } catch (const DegenerateFitError& e) {
      throw DegenerateFitError("train: class '" + label + "': " + e.what());
    }
    if (bundle.channel_schema.empty()) {
      bundle.channel_schema = series.channels;
    }
    ++class_index;
  }
  return bundle;
}

double sequence_log_likelihood(const TimeSeries& series, const GmmModel& model,
                               const EmbeddingParams& params) {
  const PhaseSpace ps = embed(series, params);
  return total_log_likelihood(ps.points, model);
}

Classification classify(const TimeSeries& series,
                        const ClassifierBundle& bundle) {
  const PhaseSpace ps = embed(series, bundle.params);
  Classification result;
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& label : bundle.class_order) {
    const double ll = total_log_likelihood(ps.points, bundle.models.at(label));
    result.scores[label] = ll;
    if (ll > best) {  // strict: first class in class_order wins ties
      best = ll;
      result.label = label;
    }
  }
  return result;
}

namespace {

double cell_accuracy(const std::map<std::string, TimeSeries>& representatives,
                     const Dataset& eval_set, const EmbeddingParams& params,
                     const FitConfig& config) {
  const ClassifierBundle bundle = train(representatives, params, config);
  int correct = 0;
  for (const auto& s : eval_set.series) {
    if (!s.label) {
      throw DomainError("grid_search: unlabeled series '" + s.id + "'");
    }
    if (classify(s, bundle).label == *s.label) ++correct;
  }
  return static_cast<double>(correct) /
         static_cast<double>(eval_set.series.size());
}

}  // namespace

GridSearchResult grid_search(
    const std::map<std::string, TimeSeries>& representatives,
    const Dataset& eval_set, int lo, int hi, const FitConfig& config,
    int workers) {
  if (eval_set.series.empty()) {
    throw DomainError("grid_search: empty evaluation set");
  }
  if (lo < 1 || hi < lo) throw DomainError("grid_search: bad range");
  if (workers < 1) workers = 1;

  int min_rep_len = std::numeric_limits<int>::max();
  for (const auto& [_, series] : representatives) {
    min_rep_len = std::min(min_rep_len, series.length());
  }

  const int span = hi - lo + 1;
  GridSearchResult result;
  result.table.resize(static_cast<std::size_t>(span) * span);

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&]() {
    for (;;) {
      const std::size_t idx = next.fetch_add(1);
      if (idx >= result.table.size()) return;
      {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (failure) return;
      }
      GridCell& cell = result.table[idx];
      cell.tau = lo + static_cast<int>(idx) / span;
      cell.dim = lo + static_cast<int>(idx) % span;
      const EmbeddingParams params{cell.tau, cell.dim};
      if (embedded_rows(min_rep_len, params) < 1 ||
          embedded_rows(min_rep_len, params) < config.n_components) {
        cell.skipped = true;
        continue;
      }
      const auto start = std::chrono::steady_clock::now();
      try {
        cell.accuracy = cell_accuracy(representatives, eval_set, params,
                                      config);
      } catch (const SeriesTooShortError&) {
        cell.skipped = true;
      } catch (const InsufficientDataError&) {
        cell.skipped = true;  // embeddable but too few points for the fit
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        return;
      }
      cell.seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                        start)
              .count();
    }
  };

  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  // Best cell: max accuracy, ties to smaller dim then smaller tau.
  bool found = false;
  for (const auto& cell : result.table) {
    if (cell.skipped) continue;
    const bool better =
        !found || cell.accuracy > result.best_accuracy ||
        (cell.accuracy == result.best_accuracy &&
         (cell.dim < result.best_dim ||
          (cell.dim == result.best_dim && cell.tau < result.best_tau)));
    if (better) {
      result.best_accuracy = cell.accuracy;
      result.best_tau = cell.tau;
      result.best_dim = cell.dim;
      found = true;
    }
  }
  if (!found) {
    throw DomainError("grid_search: every cell was skipped");
  }
  return result;
}

std::string grid_to_csv(const GridSearchResult& result, bool include_timing) {
  std::ostringstream out;
  out << (include_timing ? "tau,d,accuracy,skipped,seconds\n"
                         : "tau,d,accuracy,skipped\n");
  out.precision(17);
  for (const auto& cell : result.table) {
    out << cell.tau << ',' << cell.dim << ',';
    if (cell.skipped) {
      out << ",1";
    } else {
      out << cell.accuracy << ",0";
    }
    if (include_timing) {
      out << ',' << (cell.skipped ? 0.0 : cell.seconds);
    }
    out << '\n';
  }
  return out.str();
}

std::string grid_summary_json(const GridSearchResult& result,
                              std::uint64_t seed) {
  nlohmann::json j;
  j["best"]["tau"] = result.best_tau;
  j["best"]["d"] = result.best_dim;
  j["best"]["accuracy"] = result.best_accuracy;
  j["seed"] = seed;
  int evaluated = 0;
  int skipped = 0;
  for (const auto& cell : result.table) {
    cell.skipped ? ++skipped : ++evaluated;
  }
  j["cells"]["evaluated"] = evaluated;
  j["cells"]["skipped"] = skipped;
  return j.dump(2) + "\n";
}

}  // namespace rpsgmm
