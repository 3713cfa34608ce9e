#ifndef RPSGMM_TYPES_HPP
#define RPSGMM_TYPES_HPP

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

namespace rpsgmm {

namespace labels {
inline constexpr const char* kRefreeze = "refreeze";
inline constexpr const char* kDrain = "drain";
inline constexpr const char* kBuried = "buried";
}  // namespace labels

/// A named, regularly-gridded sequence of one or more feature channels.
/// Timestamps are integer day indices from the window start (day 0 = May 1).
/// NaN values are permitted only while `raw` is set, before interpolation.
struct TimeSeries {
  std::string id;
  std::vector<int> timestamps;
  std::vector<std::string> channels;
  Eigen::MatrixXd values;  // one row per timestamp, one column per channel
  std::optional<std::string> label;
  bool raw = false;

  int length() const { return static_cast<int>(timestamps.size()); }
  int channel_count() const { return static_cast<int>(channels.size()); }
  int channel_index(const std::string& name) const;

  /// Throws SchemaError if any structural invariant is violated.
  void validate() const;
};

/// A labeled collection of series sharing one channel schema and grid length.
struct Dataset {
  std::vector<TimeSeries> series;
  std::vector<std::string> channel_schema;

  int size() const { return static_cast<int>(series.size()); }

  /// Distinct labels in first-appearance order.
  std::vector<std::string> label_set() const;

  /// Throws SchemaError if members disagree on schema or grid length.
  void validate() const;
};

}  // namespace rpsgmm

#endif  // RPSGMM_TYPES_HPP
