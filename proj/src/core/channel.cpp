#include "core/channel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "core/rng.hpp"

namespace breathsim::channel {

namespace {

constexpr double kPi = std::numbers::pi;

double population_variance(const std::vector<double>& x) {
  double m = 0.0;
  for (double v : x) m += v;
  m /= static_cast<double>(x.size());
  double var = 0.0;
  for (double v : x) var += (v - m) * (v - m);
  return var / static_cast<double>(x.size());
}

}  // namespace

void validate(const ChannelConfig& c) {
  require(c.distance_m > 0.0, Err::invalid_argument, "distance must be positive");
  require(c.reference_distance_m > 0.0, Err::invalid_argument,
          "reference distance must be positive");
  require(c.path_loss_exponent >= 0.0, Err::invalid_argument,
          "path-loss exponent must be non-negative");
  require(c.noise_sigma_v >= 0.0, Err::invalid_argument, "noise sigma must be non-negative");
  require(c.drift_amplitude_v >= 0.0, Err::invalid_argument,
          "drift amplitude must be non-negative");
  require(c.drift_frequency_hz >= 0.0, Err::invalid_argument,
          "drift frequency must be non-negative");
  require(c.adc_bits == 0 || (c.adc_bits >= 1 && c.adc_bits <= 24), Err::invalid_argument,
          "adc_bits must be 0 (off) or within 1..24");
  require(c.adc_full_scale_v > 0.0, Err::invalid_argument, "ADC full scale must be positive");
}

double path_gain(const ChannelConfig& c) {
  validate(c);
  return std::pow(c.reference_distance_m / c.distance_m, c.path_loss_exponent);
}

SensorTrace transduce(const waveform::ChestTrace& chest, const ChannelConfig& config) {
  validate(config);
  require(!chest.samples.empty(), Err::invalid_argument, "empty chest trace");
  const double gain = path_gain(config) * config.signal_gain;

  Rng rng(config.seed);
  const double drift_phase = rng.uniform(0.0, 2.0 * kPi);

  SensorTrace out;
  out.samples.resize(chest.samples.size());
  out.sample_rate_hz = chest.sample_rate_hz;
  out.label = chest.label;
  out.true_rate_bpm = chest.true_rate_bpm;
  out.true_depth = chest.true_depth;
  out.distance_m = config.distance_m;
  out.source_seed = chest.seed;
  out.channel_seed = config.seed;

  for (std::size_t i = 0; i < chest.samples.size(); ++i) {
    const double t = static_cast<double>(i) / chest.sample_rate_hz;
    const double drift =
        config.drift_amplitude_v *
        std::sin(2.0 * kPi * config.drift_frequency_hz * t + drift_phase);
    const double noise = config.noise_sigma_v > 0.0 ? rng.normal(0.0, config.noise_sigma_v)
                                                    : 0.0;
    out.samples[i] = config.dc_offset_v + gain * chest.samples[i] + drift + noise;
  }
  return out;
}

SensorTrace quantize(const SensorTrace& trace, const ChannelConfig& config) {
  validate(config);
  require(config.adc_bits >= 1, Err::invalid_argument, "quantize requires adc_bits >= 1");
  const double fs = config.adc_full_scale_v;
  const double levels = std::ldexp(1.0, config.adc_bits);  // 2^bits
  const double step = fs / (levels - 1.0);
  SensorTrace out = trace;
  for (double& v : out.samples) {
    const double clamped = std::clamp(v, 0.0, fs);
    v = step * std::round(clamped / step);
  }
  return out;
}

SensorTrace sense(const waveform::ChestTrace& chest, const ChannelConfig& config) {
  SensorTrace t = transduce(chest, config);
  if (config.adc_bits > 0) t = quantize(t, config);
  return t;
}

double measure_snr(const waveform::ChestTrace& chest, const SensorTrace& sensor,
                   const ChannelConfig& config) {
  validate(config);
  require(chest.samples.size() == sensor.samples.size(), Err::length_mismatch,
          "chest and sensor traces differ in length");
  require(!chest.samples.empty(), Err::invalid_argument, "empty traces");
  const double gain = path_gain(config) * config.signal_gain;

  std::vector<double> signal(chest.samples.size());
  std::vector<double> residual(chest.samples.size());
  for (std::size_t i = 0; i < chest.samples.size(); ++i) {
    signal[i] = gain * chest.samples[i];
    residual[i] = sensor.samples[i] - config.dc_offset_v - signal[i];
  }
  const double vs = population_variance(signal);
  const double vr = population_variance(residual);
  if (vr <= 0.0) return std::numeric_limits<double>::infinity();
  if (vs <= 0.0) return -std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(vs / vr);
}

}  // namespace breathsim::channel
