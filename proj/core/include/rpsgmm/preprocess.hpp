#ifndef RPSGMM_PREPROCESS_HPP
#define RPSGMM_PREPROCESS_HPP

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "rpsgmm/types.hpp"

namespace rpsgmm {

namespace channels {
inline constexpr const char* kHvLake = "hv_lake";
inline constexpr const char* kHvBackground = "hv_background";
inline constexpr const char* kNWater = "n_water";
inline constexpr const char* kNTotal = "n_total";
inline constexpr const char* kHvAnom = "hv_anom";
inline constexpr const char* kPWater = "p_water";
}  // namespace channels

/// Irregular per-channel satellite observations for one lake. Observation
/// days may differ between channels.
struct RawObservations {
  std::string id;
  // channel -> (day, value), sorted by day within each channel
  std::map<std::string, std::vector<std::pair<int, double>>> samples;
};

/// Backscatter anomaly: lake minus background, in dB.
double hv_anomaly(double hv_lake, double hv_background);

/// Water percentage: 100 * n_water / n_total, in [0, 100].
double water_percentage(double n_water, double n_total);

/// Resamples irregular observations onto a daily grid over
/// [day_start, day_end]. Interior days are linearly interpolated between
/// bracketing observations; days outside the observed span hold the nearest
/// observed value. Channels appear in `channel_order` if given, otherwise in
/// map order.
TimeSeries interpolate_daily(const RawObservations& raw, int day_start,
                             int day_end,
                             const std::vector<std::string>& channel_order = {});

/// Replaces the named channel with a centered moving average over
/// `window_days` days. An even window of width w covers [t - w/2, t + w/2 - 1];
/// boundary windows are truncated to the in-range portion. Other channels are
/// untouched.
TimeSeries smooth(const TimeSeries& series, const std::string& channel,
                  int window_days);

struct PreprocessOptions {
  int day_start = 0;
  int day_end = 244;  // May 1 .. Dec 31
  int smooth_window = 12;
  bool smooth_p_water = false;
};

/// Full feature pipeline for one lake: differences hv_lake/hv_background on
/// shared observation days into hv_anom, turns pixel counts into p_water,
/// interpolates both onto the daily window, and smooths hv_anom.
TimeSeries preprocess_lake(const RawObservations& raw,
                           const PreprocessOptions& opts = {});

}  // namespace rpsgmm

#endif  // RPSGMM_PREPROCESS_HPP
