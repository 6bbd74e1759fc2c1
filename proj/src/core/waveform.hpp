#pragma once

#include <cstdint>
#include <vector>

#include "core/classes.hpp"

namespace breathsim::waveform {

struct WaveformSpec {
  BreathingClass cls = BreathingClass::Eupnea;
  double rate_bpm = 15.0;
  double depth = 0.4;  // fraction of maximum rib-cage travel
  double duration_s = 60.0;
  double sample_rate_hz = 20.0;
  double period_jitter = 0.05;     // fractional, in [0, 0.5)
  double amplitude_jitter = 0.05;  // fractional, in [0, 0.5)
  std::uint64_t seed = 0;
};

struct ChestTrace {
  std::vector<double> samples;  // displacement, clamped to [0, 1]
  double sample_rate_hz = 20.0;
  BreathingClass label = BreathingClass::Eupnea;
  double true_rate_bpm = 0.0;
  double true_depth = 0.0;
  std::uint64_t seed = 0;
};

/// Draws rate and depth uniformly within the class ranges; deterministic in
/// the seed. cls must not be Faulty (Faulty has no rate/depth to draw).
WaveformSpec sample_spec(BreathingClass cls, double duration_s, double sample_rate_hz,
                         std::uint64_t seed, double period_jitter = 0.05,
                         double amplitude_jitter = 0.05);

/// Chest displacement as concatenated raised-cosine breathing cycles with
/// per-cycle period and amplitude jitter. A zero rate (Apnea) yields a flat
/// zero trace.
ChestTrace synth_chest_trace(const WaveformSpec& spec);

/// Faulty recording with no breathing waveform: one of three artifact modes
/// (baseline drift, step discontinuities, saturation), drawn uniformly per
/// seed. Candidates whose breathing-band power ratio looks periodic are
/// redrawn, up to 10 attempts.
ChestTrace synth_faulty_trace(double duration_s, double sample_rate_hz, std::uint64_t seed);

// Individual artifact modes, reachable directly for targeted tests.
ChestTrace synth_drift_trace(double duration_s, double sample_rate_hz, std::uint64_t seed);
ChestTrace synth_step_trace(double duration_s, double sample_rate_hz, std::uint64_t seed);
ChestTrace synth_saturation_trace(double duration_s, double sample_rate_hz, double freq_hz,
                                  double amplitude, double offset, double phase);

// Admission threshold for faulty traces: breathing-band power ratio at or
// below this value counts as aperiodic.
inline constexpr double kFaultyBandRatioMax = 0.5;

}  // namespace breathsim::waveform
