#include "rpsgmm/preprocess.hpp"

#include <algorithm>
#include <cmath>

#include "rpsgmm/errors.hpp"

namespace rpsgmm {

double hv_anomaly(double hv_lake, double hv_background) {
  if (!std::isfinite(hv_lake) || !std::isfinite(hv_background)) {
    throw DomainError("hv_anomaly: non-finite input");
  }
  return hv_lake - hv_background;
}

double water_percentage(double n_water, double n_total) {
  if (!std::isfinite(n_water) || !std::isfinite(n_total)) {
    throw DomainError("water_percentage: non-finite input");
  }
  if (n_total <= 0.0) {
    throw DomainError("water_percentage: n_total must be positive");
  }
  if (n_water < 0.0 || n_water > n_total) {
    throw DomainError("water_percentage: n_water must lie in [0, n_total]");
  }
  return 100.0 * n_water / n_total;
}

namespace {

double interpolate_at(const std::vector<std::pair<int, double>>& obs,
                      int day) {
  if (day <= obs.front().first) return obs.front().second;
  if (day >= obs.back().first) return obs.back().second;
  // Find the bracketing pair.
  auto upper = std::upper_bound(
      obs.begin(), obs.end(), day,
      [](int d, const std::pair<int, double>& o) { return d < o.first; });
  auto lower = upper - 1;
  if (lower->first == day) return lower->second;
  const double t = static_cast<double>(day - lower->first) /
                   static_cast<double>(upper->first - lower->first);
  return lower->second + t * (upper->second - lower->second);
}

}  // namespace

TimeSeries interpolate_daily(const RawObservations& raw, int day_start,
                             int day_end,
                             const std::vector<std::string>& channel_order) {
  if (day_end < day_start) {
    throw DomainError("interpolate_daily: empty window");
  }
  std::vector<std::string> order = channel_order;
  if (order.empty()) {
    for (const auto& [name, _] : raw.samples) order.push_back(name);
  }

  const int n_days = day_end - day_start + 1;
  TimeSeries out;
  out.id = raw.id;
  out.channels = order;
  out.timestamps.resize(n_days);
  out.values.resize(n_days, static_cast<int>(order.size()));

  for (int i = 0; i < n_days; ++i) out.timestamps[i] = day_start + i;

  for (std::size_t c = 0; c < order.size(); ++c) {
    auto it = raw.samples.find(order[c]);
    if (it == raw.samples.end()) {
      throw SchemaError("interpolate_daily: series '" + raw.id +
                        "' has no channel '" + order[c] + "'");
    }
    auto obs = it->second;
    std::sort(obs.begin(), obs.end());
    if (obs.size() < 2) {
      throw InsufficientDataError(
          "interpolate_daily: channel '" + order[c] + "' of series '" +
          raw.id + "' has " + std::to_string(obs.size()) +
          " observations, need at least 2");
    }
    for (int i = 0; i < n_days; ++i) {
      out.values(i, static_cast<int>(c)) = interpolate_at(obs, day_start + i);
    }
  }
  out.validate();
  return out;
}

TimeSeries smooth(const TimeSeries& series, const std::string& channel,
                  int window_days) {
  if (window_days < 1) {
    throw DomainError("smooth: window_days must be >= 1");
  }
  const int c = series.channel_index(channel);  // throws SchemaError
  const int n = series.length();
  // Window [t - w/2, t + (w-1)/2]; for even w this is [t-w/2, t+w/2-1].
  const int back = window_days / 2;
  const int fwd = (window_days - 1) / 2;

  TimeSeries out = series;
  for (int t = 0; t < n; ++t) {
    const int lo = std::max(0, t - back);
    const int hi = std::min(n - 1, t + fwd);
    double sum = 0.0;
    for (int k = lo; k <= hi; ++k) sum += series.values(k, c);
    out.values(t, c) = sum / static_cast<double>(hi - lo + 1);
  }
  return out;
}

TimeSeries preprocess_lake(const RawObservations& raw,
                           const PreprocessOptions& opts) {
  RawObservations derived;
  derived.id = raw.id;

  // Backscatter anomaly on days where lake and background were both observed.
  {
    auto lake_it = raw.samples.find(channels::kHvLake);
    auto bg_it = raw.samples.find(channels::kHvBackground);
    if (lake_it == raw.samples.end() || bg_it == raw.samples.end()) {
      throw SchemaError("preprocess_lake: series '" + raw.id +
                        "' is missing hv_lake or hv_background");
    }
    std::map<int, double> bg(bg_it->second.begin(), bg_it->second.end());
    auto& anom = derived.samples[channels::kHvAnom];
    for (const auto& [day, lake_val] : lake_it->second) {
      auto b = bg.find(day);
      if (b != bg.end()) {
        anom.emplace_back(day, hv_anomaly(lake_val, b->second));
      }
    }
    std::sort(anom.begin(), anom.end());
  }

  // Water percentage on days with both pixel counts.
  {
    auto water_it = raw.samples.find(channels::kNWater);
    auto total_it = raw.samples.find(channels::kNTotal);
    if (water_it == raw.samples.end() || total_it == raw.samples.end()) {
      throw SchemaError("preprocess_lake: series '" + raw.id +
                        "' is missing n_water or n_total");
    }
    std::map<int, double> totals(total_it->second.begin(),
                                 total_it->second.end());
    auto& pw = derived.samples[channels::kPWater];
    for (const auto& [day, n_water] : water_it->second) {
      auto t = totals.find(day);
      if (t != totals.end()) {
        pw.emplace_back(day, water_percentage(n_water, t->second));
      }
    }
    std::sort(pw.begin(), pw.end());
  }

  TimeSeries daily =
      interpolate_daily(derived, opts.day_start, opts.day_end,
                        {channels::kHvAnom, channels::kPWater});
  daily = smooth(daily, channels::kHvAnom, opts.smooth_window);
  if (opts.smooth_p_water) {
    daily = smooth(daily, channels::kPWater, opts.smooth_window);
  }
  return daily;
}

}  // namespace rpsgmm
