#include "rpsgmm/synthetic.hpp"

#include <algorithm>
#include <cmath>

#include "rpsgmm/errors.hpp"
#include "rpsgmm/preprocess.hpp"
#include "rpsgmm/rng.hpp"

#include "json.hpp"

namespace rpsgmm {

void SyntheticSpec::validate() const {
  if (length < 2) throw DomainError("SyntheticSpec: length must be >= 2");
  if (per_class < 1) throw DomainError("SyntheticSpec: per_class must be >= 1");
  if (noise < 0.0) throw DomainError("SyntheticSpec: noise must be >= 0");
}

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

struct Archetype {
  const char* label;
  // (t in [0,1], melt-onset shift, amplitude factor) -> (hv_anom, p_water)
  void (*eval)(double t, double shift, double amp, double* hv, double* pw);
};

void refreeze_curve(double t, double shift, double amp, double* hv,
                    double* pw) {
  // Melt-season bump in both channels, both back to zero by fall.
  const double rise = sigmoid((t - (0.15 + shift)) / 0.04);
  const double fall = sigmoid((t - (0.55 + shift)) / 0.05);
  *pw = 70.0 * amp * rise * (1.0 - fall);
  *hv = -8.0 * amp * rise * (1.0 - fall);
}

void drain_curve(double t, double shift, double amp, double* hv, double* pw) {
  // Water fraction collapses abruptly mid-season; anomaly recovers with it.
  const double rise = sigmoid((t - (0.10 + shift)) / 0.03);
  const double collapse = sigmoid((t - (0.32 + shift)) / 0.012);
  *pw = 75.0 * amp * rise * (1.0 - collapse);
  *hv = -6.0 * amp * rise * (1.0 - collapse);
}

void buried_curve(double t, double shift, double amp, double* hv,
                  double* pw) {
  // Surface water disappears but the backscatter anomaly persists.
  const double rise = sigmoid((t - (0.15 + shift)) / 0.04);
  const double fall = sigmoid((t - (0.55 + shift)) / 0.05);
  *pw = 65.0 * amp * rise * (1.0 - fall);
  *hv = -10.0 * amp * rise;
}

constexpr Archetype kArchetypes[] = {
    {labels::kRefreeze, refreeze_curve},
    {labels::kDrain, drain_curve},
    {labels::kBuried, buried_curve},
};

}  // namespace

Dataset generate_synthetic(const SyntheticSpec& spec) {
  spec.validate();

  Dataset data;
  data.channel_schema = {channels::kHvAnom, channels::kPWater};

  for (std::size_t cls = 0; cls < std::size(kArchetypes); ++cls) {
    const Archetype& arch = kArchetypes[cls];
    for (int sample = 0; sample < spec.per_class; ++sample) {
      Rng rng(Rng::derive(spec.seed,
                          {static_cast<std::uint64_t>(cls),
                           static_cast<std::uint64_t>(sample)}));
      // Per-sample shape jitter, scaled by the noise level.
      const double shift = 0.03 * spec.noise * rng.next_gaussian();
      const double amp = 1.0 + 0.08 * spec.noise * rng.next_gaussian();

      TimeSeries ts;
      ts.id = std::string(arch.label) + "_" + std::to_string(sample);
      ts.label = arch.label;
      ts.channels = data.channel_schema;
      ts.timestamps.resize(spec.length);
      ts.values.resize(spec.length, 2);
      for (int day = 0; day < spec.length; ++day) {
        ts.timestamps[day] = day;
        const double t =
            static_cast<double>(day) / static_cast<double>(spec.length - 1);
        double hv = 0.0;
        double pw = 0.0;
        arch.eval(t, shift, amp, &hv, &pw);
        hv += 0.4 * spec.noise * rng.next_gaussian();
        pw += 2.0 * spec.noise * rng.next_gaussian();
        ts.values(day, 0) = hv;
        ts.values(day, 1) = std::clamp(pw, 0.0, 100.0);
      }
      data.series.push_back(std::move(ts));
    }
  }
  data.validate();
  return data;
}

SyntheticSpec parse_synthetic_spec(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("synthetic spec: ") + e.what());
  }
  SyntheticSpec spec;
  if (j.contains("length")) spec.length = j.at("length").get<int>();
  if (j.contains("per_class")) spec.per_class = j.at("per_class").get<int>();
  if (j.contains("noise")) spec.noise = j.at("noise").get<double>();
  if (j.contains("seed")) spec.seed = j.at("seed").get<std::uint64_t>();
  spec.validate();
  return spec;
}

}  // namespace rpsgmm
