#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "core/channel.hpp"

namespace breathsim::features {

inline constexpr int kFeatureCount = 12;

using FeatureVector = std::array<double, kFeatureCount>;

// Conditioning and extraction parameters. The chain is detrend -> zero-phase
// low-pass -> normalize; rate features come from the zero-padded periodogram
// of the normalized signal, amplitude features from the conditioned signal
// before normalization.
struct DspConfig {
  double lowpass_cutoff_hz = 2.0;
  int lowpass_taps = 101;
  double band_lo_hz = 0.05;  // breathing band, 3..60 BPM
  double band_hi_hz = 1.0;
  std::size_t min_pad = 4096;
  double rate_gate_band_ratio = 0.1;  // below this the rate estimate is forced to 0
  double peak_prominence = 0.5;       // on the normalized signal
  double peak_min_spacing_s = 0.8;
  double autocorr_lag_min_s = 1.0;
  double autocorr_lag_max_s = 20.0;
};

/// Fixed feature order; the dataset and model formats depend on it.
const std::array<std::string, kFeatureCount>& feature_names();

/// Reduces one recording to the 12-feature vector. The recording must cover
/// at least 10 seconds.
FeatureVector extract_features(const std::vector<double>& samples, double sample_rate_hz,
                               const DspConfig& config = {});

inline FeatureVector extract_features(const channel::SensorTrace& trace,
                                      const DspConfig& config = {}) {
  return extract_features(trace.samples, trace.sample_rate_hz, config);
}

}  // namespace breathsim::features
