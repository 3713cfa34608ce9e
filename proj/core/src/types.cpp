#include "rpsgmm/types.hpp"

#include <cmath>

#include "rpsgmm/errors.hpp"

namespace rpsgmm {

int TimeSeries::channel_index(const std::string& name) const {
  for (int c = 0; c < channel_count(); ++c) {
    if (channels[c] == name) return c;
  }
  throw SchemaError("unknown channel '" + name + "' in series '" + id + "'");
}

void TimeSeries::validate() const {
  if (values.rows() != length()) {
    throw SchemaError("series '" + id + "': value rows (" +
                      std::to_string(values.rows()) +
                      ") != timestamp count (" + std::to_string(length()) +
                      ")");
  }
  if (values.cols() != channel_count()) {
    throw SchemaError("series '" + id + "': value columns (" +
                      std::to_string(values.cols()) + ") != channel count (" +
                      std::to_string(channel_count()) + ")");
  }
  for (int i = 1; i < length(); ++i) {
    if (timestamps[i] <= timestamps[i - 1]) {
      throw SchemaError("series '" + id +
                        "': timestamps not strictly increasing at index " +
                        std::to_string(i));
    }
  }
  if (!raw && values.hasNaN()) {
    throw SchemaError("series '" + id +
                      "': NaN values in a non-raw series");
  }
}

std::vector<std::string> Dataset::label_set() const {
  std::vector<std::string> out;
  for (const auto& s : series) {
    if (!s.label) continue;
    bool seen = false;
    for (const auto& l : out) {
      if (l == *s.label) {
        seen = true;
        break;
      }
    }
    if (!seen) out.push_back(*s.label);
  }
  return out;
}

void Dataset::validate() const {
  for (const auto& s : series) {
    s.validate();
    if (s.channels != channel_schema) {
      throw SchemaError("series '" + s.id +
                        "' does not match the dataset channel schema");
    }
    if (!series.empty() && s.length() != series.front().length()) {
      throw SchemaError("series '" + s.id + "' has grid length " +
                        std::to_string(s.length()) + ", expected " +
                        std::to_string(series.front().length()));
    }
  }
}

}  // namespace rpsgmm
