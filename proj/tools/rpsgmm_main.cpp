// Batch CLI for the phase-space GMM time series classifier.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "rpsgmm/bundle_io.hpp"
#include "rpsgmm/classifier.hpp"
#include "rpsgmm/csv.hpp"
#include "rpsgmm/errors.hpp"
#include "rpsgmm/metrics.hpp"
#include "rpsgmm/preprocess.hpp"
#include "rpsgmm/rng.hpp"
#include "rpsgmm/synthetic.hpp"

namespace {

using namespace rpsgmm;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNumerical = 3;

std::uint64_t default_seed() {
  if (const char* env = std::getenv("RPSGMM_SEED")) {
    return std::strtoull(env, nullptr, 10);
  }
  return 0;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

std::pair<int, int> parse_range(const std::string& s, const char* what) {
  const auto parts = split(s, ':');
  if (parts.size() != 2) {
    throw DomainError(std::string(what) + " must be 'lo:hi', got '" + s + "'");
  }
  return {std::stoi(parts[0]), std::stoi(parts[1])};
}

/// `class=id,class=id` from --reps; an empty string picks the first series
/// of each class in dataset order.
std::map<std::string, TimeSeries> pick_representatives(
    const Dataset& data, const std::string& reps_arg) {
  std::map<std::string, TimeSeries> reps;
  if (reps_arg.empty()) {
    for (const auto& s : data.series) {
      if (s.label && !reps.count(*s.label)) reps[*s.label] = s;
    }
    if (reps.size() < 2) {
      throw DomainError("dataset has fewer than 2 labeled classes");
    }
    return reps;
  }
  for (const auto& pair : split(reps_arg, ',')) {
    const auto kv = split(pair, '=');
    if (kv.size() != 2 || kv[0].empty() || kv[1].empty()) {
      throw DomainError("bad --reps entry '" + pair +
                        "', expected class=series_id");
    }
    const TimeSeries* found = nullptr;
    for (const auto& s : data.series) {
      if (s.id == kv[1]) {
        found = &s;
        break;
      }
    }
    if (!found) {
      throw DomainError("representative series id '" + kv[1] +
                        "' not found in the dataset");
    }
    reps[kv[0]] = *found;
  }
  return reps;
}

/// Deterministic stratified split: returns (grid-eval set, holdout set).
std::pair<Dataset, Dataset> holdout_split(const Dataset& data,
                                          double fraction,
                                          std::uint64_t seed) {
  if (fraction < 0.0 || fraction >= 1.0) {
    throw DomainError("--holdout fraction must lie in [0, 1)");
  }
  Dataset eval_set{{}, data.channel_schema};
  Dataset hold_set{{}, data.channel_schema};
  if (fraction == 0.0) {
    eval_set.series = data.series;
    return {eval_set, hold_set};
  }
  std::map<std::string, std::vector<std::size_t>> by_label;
  for (std::size_t i = 0; i < data.series.size(); ++i) {
    by_label[data.series[i].label.value_or("")].push_back(i);
  }
  std::vector<bool> held(data.series.size(), false);
  for (auto& [label, idx] : by_label) {
    Rng rng(Rng::derive(seed, {0x686f6c64ULL, std::hash<std::string>{}(label)}));
    for (std::size_t i = idx.size(); i > 1; --i) {
      std::swap(idx[i - 1], idx[rng.next_below(i)]);
    }
    const auto n_hold = static_cast<std::size_t>(
        fraction * static_cast<double>(idx.size()) + 0.5);
    for (std::size_t i = 0; i < n_hold; ++i) held[idx[i]] = true;
  }
  for (std::size_t i = 0; i < data.series.size(); ++i) {
    (held[i] ? hold_set : eval_set).series.push_back(data.series[i]);
  }
  if (eval_set.series.empty()) {
    throw DomainError("--holdout fraction leaves no grid-search data");
  }
  return {eval_set, hold_set};
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// ---------------------------------------------------------------------------

int cmd_preprocess(const std::string& raw_path, const std::string& out_path,
                   int smooth_window, const std::string& window) {
  PreprocessOptions opts;
  opts.smooth_window = smooth_window;
  std::tie(opts.day_start, opts.day_end) = parse_range(window, "--window");

  Dataset out;
  out.channel_schema = {channels::kHvAnom, channels::kPWater};
  for (const auto& raw : load_raw_observations(raw_path)) {
    out.series.push_back(preprocess_lake(raw, opts));
  }
  if (out.series.empty()) throw DomainError("no series in raw input");
  save_dataset(out, out_path);
  std::cerr << "preprocessed " << out.series.size() << " series -> "
            << out_path << "\n";
  return kExitOk;
}

int cmd_train(const std::string& data_path, const std::string& reps_arg,
              int tau, int dim, const std::string& out_path,
              const std::vector<std::string>& schema, FitConfig config) {
  const Dataset data = load_dataset(data_path, schema);
  const auto reps = pick_representatives(data, reps_arg);
  const ClassifierBundle bundle = train(reps, {tau, dim}, config);
  save_bundle(bundle, out_path);
  std::cerr << "trained " << bundle.class_order.size() << " class models -> "
            << out_path << "\n";
  return kExitOk;
}

int cmd_classify(const std::string& bundle_path, const std::string& data_path,
                 const std::string& out_path) {
  const ClassifierBundle bundle = load_bundle(bundle_path);
  const Dataset data = load_dataset(data_path, bundle.channel_schema);

  std::ostringstream out;
  out << "series_id,predicted";
  for (const auto& label : bundle.class_order) out << ",loglik_" << label;
  out << "\n";
  out.precision(17);
  for (const auto& s : data.series) {
    const Classification c = classify(s, bundle);
    out << s.id << ',' << c.label;
    for (const auto& label : bundle.class_order) {
      out << ',' << c.scores.at(label);
    }
    out << '\n';
  }
  write_file_atomic(out_path, out.str());
  std::cerr << "classified " << data.series.size() << " series -> "
            << out_path << "\n";
  return kExitOk;
}

int cmd_grid_search(const std::string& data_path, const std::string& reps_arg,
                    const std::string& range, double holdout, int workers,
                    const std::string& out_dir,
                    const std::vector<std::string>& schema,
                    FitConfig config) {
  const auto [lo, hi] = parse_range(range, "--range");
  const Dataset data = load_dataset(data_path, schema);
  const auto reps = pick_representatives(data, reps_arg);
  auto [eval_set, hold_set] = holdout_split(data, holdout, config.seed);

  const GridSearchResult result =
      grid_search(reps, eval_set, lo, hi, config, workers);

  std::filesystem::create_directories(out_dir);
  const std::filesystem::path dir(out_dir);
  write_file_atomic(dir / "grid.csv", grid_to_csv(result));

  nlohmann::json summary =
      nlohmann::json::parse(grid_summary_json(result, config.seed));
  if (!hold_set.series.empty()) {
    const ClassifierBundle best = train(
        reps, {result.best_tau, result.best_dim}, config);
    const EvalReport report = evaluate(best, hold_set);
    summary["holdout"]["fraction"] = holdout;
    summary["holdout"]["series"] = static_cast<int>(hold_set.series.size());
    summary["holdout"]["accuracy"] = report.accuracy;
  }
  write_file_atomic(dir / "summary.json", summary.dump(2) + "\n");
  std::cerr << "grid search best: tau=" << result.best_tau
            << " d=" << result.best_dim
            << " accuracy=" << result.best_accuracy << " -> " << out_dir
            << "\n";
  return kExitOk;
}

int cmd_evaluate(const std::string& bundle_path, const std::string& data_path,
                 const std::string& out_path) {
  const ClassifierBundle bundle = load_bundle(bundle_path);
  const Dataset data = load_dataset(data_path, bundle.channel_schema);
  const EvalReport report = evaluate(bundle, data);
  write_file_atomic(out_path, report_to_json(report));
  std::cerr << "accuracy " << report.accuracy << " on " << report.total()
            << " series -> " << out_path << "\n";
  return kExitOk;
}

int cmd_synth(const std::string& spec_path, const std::string& out_path,
              std::uint64_t seed, bool seed_given) {
  SyntheticSpec spec = parse_synthetic_spec(read_file(spec_path));
  if (seed_given) spec.seed = seed;
  save_dataset(generate_synthetic(spec), out_path);
  std::cerr << "generated synthetic dataset -> " << out_path << "\n";
  return kExitOk;
}

int cmd_plot_data(const std::string& bundle_path, const std::string& data_path,
                  const std::string& series_id, const std::string& out_path) {
  const ClassifierBundle bundle = load_bundle(bundle_path);
  const Dataset data = load_dataset(data_path, bundle.channel_schema);
  const TimeSeries* series = nullptr;
  for (const auto& s : data.series) {
    if (s.id == series_id) {
      series = &s;
      break;
    }
  }
  if (!series) {
    throw DomainError("series id '" + series_id + "' not found");
  }

  std::ostringstream out;
  out << "day,kind,name,value\n";
  out.precision(17);
  for (int r = 0; r < series->length(); ++r) {
    for (int c = 0; c < series->channel_count(); ++c) {
      out << series->timestamps[r] << ",channel," << series->channels[c]
          << ',' << series->values(r, c) << '\n';
    }
  }
  const PhaseSpace ps = embed(*series, bundle.params);
  const int offset = (bundle.params.dim - 1) * bundle.params.tau;
  for (const auto& label : bundle.class_order) {
    const GmmModel& model = bundle.models.at(label);
    double running = 0.0;
    for (int r = 0; r < ps.size(); ++r) {
      running += log_mixture_density(ps.points.row(r).transpose(), model);
      out << series->timestamps[static_cast<std::size_t>(offset + r)]
          << ",cumulative_loglik," << label << ',' << running << '\n';
    }
  }
  write_file_atomic(out_path, out.str());
  std::cerr << "wrote plot data for '" << series_id << "' -> " << out_path
            << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Phase-space GMM time series classifier"};
  app.require_subcommand(1);

  std::uint64_t seed = default_seed();
  app.add_option("--seed", seed,
                 "Global RNG seed (env RPSGMM_SEED as fallback)");

  std::string channels_arg = "hv_anom,p_water";
  app.add_option("--channels", channels_arg,
                 "Comma-separated channel schema for dataset CSVs");

  FitConfig fit;
  app.add_option("--components", fit.n_components, "Mixture components")
      ->check(CLI::PositiveNumber);
  app.add_option("--kmeans-restarts", fit.n_init, "k-means restarts")
      ->check(CLI::PositiveNumber);
  app.add_option("--max-iter", fit.max_iter, "EM iteration cap")
      ->check(CLI::PositiveNumber);
  app.add_option("--tol", fit.tol, "EM relative log-likelihood tolerance");
  app.add_option("--reg", fit.reg,
                 "Covariance ridge (negative selects the automatic scale)");

  // preprocess
  auto* pre = app.add_subcommand("preprocess",
                                 "Raw observations -> daily feature CSV");
  std::string pre_raw, pre_out, pre_window = "0:244";
  int pre_smooth = 12;
  pre->add_option("--raw", pre_raw, "Raw observation CSV")->required();
  pre->add_option("--out", pre_out, "Output dataset CSV")->required();
  pre->add_option("--smooth-window", pre_smooth, "Smoothing window in days");
  pre->add_option("--window", pre_window, "Day window lo:hi");

  // train
  auto* tr = app.add_subcommand("train", "Train a classifier bundle");
  std::string tr_data, tr_reps, tr_out;
  int tr_tau = 0, tr_dim = 0;
  tr->add_option("--data", tr_data, "Dataset CSV")->required();
  tr->add_option("--reps", tr_reps,
                 "Representatives as class=id,... (default: first series "
                 "of each class)");
  tr->add_option("--tau", tr_tau, "Time delay")->required();
  tr->add_option("--dim", tr_dim, "Embedding dimension")->required();
  tr->add_option("--out", tr_out, "Output bundle file")->required();

  // classify
  auto* cl = app.add_subcommand("classify", "Classify series with a bundle");
  std::string cl_bundle, cl_data, cl_out;
  cl->add_option("--bundle", cl_bundle, "Bundle file")->required();
  cl->add_option("--data", cl_data, "Dataset CSV")->required();
  cl->add_option("--out", cl_out, "Output CSV")->required();

  // grid-search
  auto* gs = app.add_subcommand("grid-search",
                                "Grid search over tau and dim");
  std::string gs_data, gs_reps, gs_range = "2:30", gs_out;
  double gs_holdout = 0.0;
  int gs_workers = 1;
  gs->add_option("--data", gs_data, "Dataset CSV")->required();
  gs->add_option("--reps", gs_reps, "Representatives as class=id,...");
  gs->add_option("--range", gs_range, "Grid range lo:hi for both tau and dim");
  gs->add_option("--holdout", gs_holdout,
                 "Fraction held out of the grid search for final reporting");
  gs->add_option("--workers", gs_workers, "Worker threads")
      ->check(CLI::PositiveNumber);
  gs->add_option("--out", gs_out, "Output directory")->required();

  // evaluate
  auto* ev = app.add_subcommand("evaluate", "Evaluation report for a bundle");
  std::string ev_bundle, ev_data, ev_out;
  ev->add_option("--bundle", ev_bundle, "Bundle file")->required();
  ev->add_option("--data", ev_data, "Labeled dataset CSV")->required();
  ev->add_option("--out", ev_out, "Output JSON")->required();

  // synth
  auto* sy = app.add_subcommand("synth", "Generate a synthetic dataset");
  std::string sy_spec, sy_out;
  sy->add_option("--spec", sy_spec, "SyntheticSpec JSON file")->required();
  sy->add_option("--out", sy_out, "Output dataset CSV")->required();

  // plot-data
  auto* pd = app.add_subcommand(
      "plot-data", "Tidy CSV of one series plus running log-likelihoods");
  std::string pd_bundle, pd_data, pd_series, pd_out;
  pd->add_option("--bundle", pd_bundle, "Bundle file")->required();
  pd->add_option("--data", pd_data, "Dataset CSV")->required();
  pd->add_option("--series", pd_series, "Series id")->required();
  pd->add_option("--out", pd_out, "Output CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  fit.seed = seed;
  const std::vector<std::string> schema = split(channels_arg, ',');

  try {
    if (pre->parsed()) {
      return cmd_preprocess(pre_raw, pre_out, pre_smooth, pre_window);
    }
    if (tr->parsed()) {
      return cmd_train(tr_data, tr_reps, tr_tau, tr_dim, tr_out, schema, fit);
    }
    if (cl->parsed()) return cmd_classify(cl_bundle, cl_data, cl_out);
    if (gs->parsed()) {
      return cmd_grid_search(gs_data, gs_reps, gs_range, gs_holdout,
                             gs_workers, gs_out, schema, fit);
    }
    if (ev->parsed()) return cmd_evaluate(ev_bundle, ev_data, ev_out);
    if (sy->parsed()) {
      return cmd_synth(sy_spec, sy_out, seed, app.count("--seed") > 0);
    }
    if (pd->parsed()) {
      return cmd_plot_data(pd_bundle, pd_data, pd_series, pd_out);
    }
  } catch (const NonPositiveDefiniteError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const DegenerateFitError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}
