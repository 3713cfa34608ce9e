#ifndef RPSGMM_SYNTHETIC_HPP
#define RPSGMM_SYNTHETIC_HPP

#include <cstdint>
#include <string>

#include "rpsgmm/types.hpp"

namespace rpsgmm {

/// Parameters for the synthetic lake-series generator. The three archetypes
/// mimic the seasonal signatures of the real classes: refreeze (anomaly and
/// water fraction decline to zero at season end), drain (mid-season collapse
/// of the water fraction), and buried (water fraction ends at zero while the
/// anomaly stays negative).
struct SyntheticSpec {
  int length = 245;        // daily samples
  int per_class = 20;      // series per class
  double noise = 1.0;      // 0 makes every sample of a class identical
  std::uint64_t seed = 0;

  void validate() const;
};

/// Deterministically generates a labeled two-channel dataset
/// (hv_anom, p_water) from the spec.
Dataset generate_synthetic(const SyntheticSpec& spec);

/// Parses a SyntheticSpec from JSON
/// ({"length":..,"per_class":..,"noise":..,"seed":..}); missing keys keep
/// their defaults.
SyntheticSpec parse_synthetic_spec(const std::string& json_text);

}  // namespace rpsgmm

#endif  // RPSGMM_SYNTHETIC_HPP
