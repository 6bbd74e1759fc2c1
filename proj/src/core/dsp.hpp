#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "core/common.hpp"

namespace breathsim::dsp {

/// Subtracts the least-squares straight line. Output has zero mean and zero
/// linear-trend coefficient.
std::vector<double> detrend(const std::vector<double>& x, double sample_rate_hz);

/// Hamming windowed-sinc low-pass FIR kernel, normalized to unity DC gain.
/// taps must be odd and >= 11; 0 < cutoff < fs/2.
std::vector<double> design_lowpass_fir(double sample_rate_hz, double cutoff_hz, int taps);

/// Zero-phase low-pass: the FIR kernel applied forward and backward over a
/// reflection-padded copy of the input. Output length equals input length.
std::vector<double> lowpass(const std::vector<double>& x, double sample_rate_hz,
                            double cutoff_hz, int taps);

struct Normalized {
  std::vector<double> samples;
  bool near_constant = false;  // input std below 1e-12; samples are all zeros
};

/// Zero mean, unit variance. Near-constant inputs yield zeros plus a flag
/// rather than an error.
Normalized normalize(const std::vector<double>& x);

/// In-place iterative radix-2 FFT; a.size() must be a power of two.
void fft_radix2(std::vector<std::complex<double>>& a);

struct Spectrum {
  std::vector<double> bin_frequency_hz;  // 0 .. Nyquist, ascending
  std::vector<double> power;             // |X_k|^2 / source_length
  double resolution_hz = 0.0;
  std::size_t source_length = 0;
};

/// One-sided power spectrum at bins 0..N/2 of the zero-padded input.
/// zero_pad_to must be a power of two and >= x.size().
Spectrum periodogram(const std::vector<double>& x, double sample_rate_hz,
                     std::size_t zero_pad_to);

struct DominantFrequency {
  double frequency_hz = 0.0;  // parabolic-refined argmax in the band
  double peak_power = 0.0;
  double band_power_ratio = 0.0;  // band power / total power excluding DC
  bool zero_power = false;
};

/// Peak search within [band_lo_hz, band_hi_hz]; 0 <= lo < hi <= Nyquist and
/// the band must contain at least one bin.
DominantFrequency dominant_frequency(const Spectrum& spectrum, double band_lo_hz,
                                     double band_hi_hz);

inline std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace breathsim::dsp
