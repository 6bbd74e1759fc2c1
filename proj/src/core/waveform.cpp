#include "core/waveform.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "core/dsp.hpp"
#include "core/rng.hpp"

namespace breathsim::waveform {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::uint64_t kFaultyAttemptTag = 0xFA017AC3u;
constexpr double kBreathingBandLoHz = 0.05;
constexpr double kBreathingBandHiHz = 1.0;

std::size_t sample_count(double duration_s, double sample_rate_hz) {
  return static_cast<std::size_t>(std::llround(duration_s * sample_rate_hz));
}

void validate_timing(double duration_s, double sample_rate_hz) {
  require(duration_s > 0.0, Err::invalid_spec, "duration must be positive");
  require(sample_rate_hz > 0.0, Err::invalid_spec, "sample rate must be positive");
  require(sample_count(duration_s, sample_rate_hz) >= 2, Err::invalid_spec,
          "trace must hold at least 2 samples");
}

void validate(const WaveformSpec& s) {
  validate_timing(s.duration_s, s.sample_rate_hz);
  require(s.cls != BreathingClass::Faulty, Err::invalid_spec,
          "faulty traces come from synth_faulty_trace");
  require(s.period_jitter >= 0.0 && s.period_jitter < 0.5, Err::invalid_spec,
          "period_jitter must lie in [0, 0.5)");
  require(s.amplitude_jitter >= 0.0 && s.amplitude_jitter < 0.5, Err::invalid_spec,
          "amplitude_jitter must lie in [0, 0.5)");
  const ClassRanges r = class_ranges(s.cls);
  require(s.rate_bpm >= r.rate_min && s.rate_bpm <= r.rate_max, Err::invalid_spec,
          "rate outside the class range");
  require(s.depth >= r.depth_min && s.depth <= r.depth_max, Err::invalid_spec,
          "depth outside the class range");
}

ChestTrace make_trace(std::vector<double> samples, double sample_rate_hz,
                      BreathingClass label, double rate, double depth,
                      std::uint64_t seed) {
  ChestTrace t;
  t.samples = std::move(samples);
  t.sample_rate_hz = sample_rate_hz;
  t.label = label;
  t.true_rate_bpm = rate;
  t.true_depth = depth;
  t.seed = seed;
  return t;
}

// Ratio of breathing-band power to total non-DC power; 0 when the band is not
// representable at this sample rate.
double breathing_band_ratio(const std::vector<double>& samples, double sample_rate_hz) {
  if (sample_rate_hz / 2.0 <= kBreathingBandLoHz) return 0.0;
  const double hi = std::min(kBreathingBandHiHz, sample_rate_hz / 2.0);
  const auto spectrum =
      dsp::periodogram(samples, sample_rate_hz,
                       dsp::next_pow2(std::max<std::size_t>(samples.size(), 4096)));
  const auto dom = dsp::dominant_frequency(spectrum, kBreathingBandLoHz, hi);
  return dom.zero_power ? 0.0 : dom.band_power_ratio;
}

std::vector<double> drift_samples(std::size_t n, Rng& rng) {
  // Random-walk baseline with the step sigma sized so the expected excursion
  // comfortably exceeds 0.5 over the trace.
  const double step_sigma = 0.75 / std::sqrt(static_cast<double>(n));
  std::vector<double> out(n);
  double x = 0.5;
  for (std::size_t i = 0; i < n; ++i) {
    x = std::clamp(x + rng.normal(0.0, step_sigma), 0.0, 1.0);
    out[i] = x;
  }
  return out;
}

std::vector<double> step_samples(std::size_t n, Rng& rng) {
  const int n_steps = 3 + static_cast<int>(rng.uniform_below(6));  // 3..8 discontinuities
  std::vector<std::size_t> cuts;
  for (int s = 0; s < n_steps; ++s)
    cuts.push_back(1 + rng.uniform_below(n > 1 ? n - 1 : 1));
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  std::vector<double> out(n);
  std::size_t begin = 0;
  double level = rng.uniform01();
  for (std::size_t cut : cuts) {
    std::fill(out.begin() + static_cast<std::ptrdiff_t>(begin),
              out.begin() + static_cast<std::ptrdiff_t>(cut), level);
    begin = cut;
    level = rng.uniform01();
  }
  std::fill(out.begin() + static_cast<std::ptrdiff_t>(begin), out.end(), level);
  return out;
}

std::vector<double> saturation_samples(std::size_t n, double sample_rate_hz, double freq_hz,
                                       double amplitude, double offset, double phase) {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / sample_rate_hz;
    out[i] = std::clamp(offset + amplitude * std::sin(2.0 * kPi * freq_hz * t + phase), 0.0, 1.0);
  }
  return out;
}

double clipped_fraction(const std::vector<double>& x) {
  std::size_t c = 0;
  for (double v : x)
    if (v == 0.0 || v == 1.0) ++c;
  return static_cast<double>(c) / static_cast<double>(x.size());
}

double excursion(const std::vector<double>& x) {
  auto [lo, hi] = std::minmax_element(x.begin(), x.end());
  return *hi - *lo;
}

}  // namespace

WaveformSpec sample_spec(BreathingClass cls, double duration_s, double sample_rate_hz,
                         std::uint64_t seed, double period_jitter, double amplitude_jitter) {
  require(cls != BreathingClass::Faulty, Err::invalid_spec,
          "faulty recordings have no rate/depth to draw");
  validate_timing(duration_s, sample_rate_hz);
  const ClassRanges r = class_ranges(cls);
  Rng rng(seed);
  WaveformSpec s;
  s.cls = cls;
  s.rate_bpm = rng.uniform(r.rate_min, r.rate_max);
  s.depth = rng.uniform(r.depth_min, r.depth_max);
  s.duration_s = duration_s;
  s.sample_rate_hz = sample_rate_hz;
  s.period_jitter = period_jitter;
  s.amplitude_jitter = amplitude_jitter;
  s.seed = seed;
  return s;
}

ChestTrace synth_chest_trace(const WaveformSpec& spec) {
  validate(spec);
  const std::size_t n = sample_count(spec.duration_s, spec.sample_rate_hz);
  std::vector<double> samples(n, 0.0);
  if (spec.rate_bpm <= 0.0) {
    return make_trace(std::move(samples), spec.sample_rate_hz, spec.cls, spec.rate_bpm,
                      spec.depth, spec.seed);
  }

  Rng rng(spec.seed);
  const double nominal_period = 60.0 / spec.rate_bpm;
  struct Cycle {
    double start, period, amplitude;
  };
  std::vector<Cycle> cycles;
  double start = 0.0;
  while (start < spec.duration_s) {
    const double u = rng.uniform(-spec.period_jitter, spec.period_jitter);
    const double w = rng.uniform(-spec.amplitude_jitter, spec.amplitude_jitter);
    const double period = nominal_period * (1.0 + u);
    cycles.push_back({start, period, spec.depth * (1.0 + w)});
    start += period;
  }

  std::size_t c = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / spec.sample_rate_hz;
    while (c + 1 < cycles.size() && t >= cycles[c + 1].start) ++c;
    const Cycle& cy = cycles[c];
    const double phase = (t - cy.start) / cy.period;
    const double d = cy.amplitude * (1.0 - std::cos(2.0 * kPi * phase)) / 2.0;
    samples[i] = std::clamp(d, 0.0, 1.0);
  }
  return make_trace(std::move(samples), spec.sample_rate_hz, spec.cls, spec.rate_bpm,
                    spec.depth, spec.seed);
}

ChestTrace synth_drift_trace(double duration_s, double sample_rate_hz, std::uint64_t seed) {
  validate_timing(duration_s, sample_rate_hz);
  Rng rng(seed);
  return make_trace(drift_samples(sample_count(duration_s, sample_rate_hz), rng),
                    sample_rate_hz, BreathingClass::Faulty, 0.0, 0.0, seed);
}

ChestTrace synth_step_trace(double duration_s, double sample_rate_hz, std::uint64_t seed) {
  validate_timing(duration_s, sample_rate_hz);
  Rng rng(seed);
  return make_trace(step_samples(sample_count(duration_s, sample_rate_hz), rng),
                    sample_rate_hz, BreathingClass::Faulty, 0.0, 0.0, seed);
}

ChestTrace synth_saturation_trace(double duration_s, double sample_rate_hz, double freq_hz,
                                  double amplitude, double offset, double phase) {
  validate_timing(duration_s, sample_rate_hz);
  require(freq_hz > 0.0 && amplitude >= 0.0, Err::invalid_spec,
          "saturation trace needs freq > 0 and amplitude >= 0");
  return make_trace(saturation_samples(sample_count(duration_s, sample_rate_hz),
                                       sample_rate_hz, freq_hz, amplitude, offset, phase),
                    sample_rate_hz, BreathingClass::Faulty, 0.0, 0.0, 0);
}

ChestTrace synth_faulty_trace(double duration_s, double sample_rate_hz, std::uint64_t seed) {
  validate_timing(duration_s, sample_rate_hz);
  const std::size_t n = sample_count(duration_s, sample_rate_hz);

  for (int attempt = 0; attempt < 10; ++attempt) {
    Rng rng(derive_seed(seed, kFaultyAttemptTag, static_cast<std::uint64_t>(attempt)));
    const int mode = static_cast<int>(rng.uniform_below(3));
    std::vector<double> samples;
    bool mode_ok = true;
    switch (mode) {
      case 0:
        samples = drift_samples(n, rng);
        mode_ok = excursion(samples) > 0.5;
        break;
      case 1:
        samples = step_samples(n, rng);
        break;
      default: {
        // Slow carrier clipped on one rail; the duty cycle target keeps at
        // least half the samples saturated without flattening the whole trace.
        const double freq = rng.uniform(0.015, 0.045);
        const double amplitude = rng.uniform(0.6, 1.2);
        const double duty = rng.uniform(0.55, 0.85);
        const bool clip_high = rng.uniform01() < 0.5;
        const double phase = rng.uniform(0.0, 2.0 * kPi);
        const double offset = clip_high ? 1.0 - amplitude * std::cos(kPi * duty)
                                        : amplitude * std::cos(kPi * duty);
        samples = saturation_samples(n, sample_rate_hz, freq, amplitude, offset, phase);
        mode_ok = clipped_fraction(samples) >= 0.5;
        break;
      }
    }
    if (!mode_ok) continue;
    if (breathing_band_ratio(samples, sample_rate_hz) <= kFaultyBandRatioMax) {
      return make_trace(std::move(samples), sample_rate_hz, BreathingClass::Faulty, 0.0,
                        0.0, seed);
    }
  }
  fail(Err::synthesis_failure,
       "could not produce an aperiodic faulty trace in 10 attempts (seed " +
           std::to_string(seed) + ")");
}

}  // namespace breathsim::waveform
