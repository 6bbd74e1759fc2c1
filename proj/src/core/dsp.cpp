#include "core/dsp.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace breathsim::dsp {

namespace {

constexpr double kPi = std::numbers::pi;

double mean_of(const std::vector<double>& x) {
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

// Causal FIR pass over ext; samples before the start are treated as absent
// (partial sums), which the reflection padding absorbs.
std::vector<double> fir_pass(const std::vector<double>& ext, const std::vector<double>& h) {
  const std::size_t n = ext.size();
  const std::size_t m = h.size();
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t kmax = std::min(m - 1, i);
    double acc = 0.0;
    for (std::size_t k = 0; k <= kmax; ++k) acc += h[k] * ext[i - k];
    out[i] = acc;
  }
  return out;
}

}  // namespace

std::vector<double> detrend(const std::vector<double>& x, double sample_rate_hz) {
  require(x.size() >= 2, Err::too_short, "detrend needs at least 2 samples");
  require(sample_rate_hz > 0.0, Err::invalid_argument, "sample rate must be positive");
  const std::size_t n = x.size();
  const double dt = 1.0 / sample_rate_hz;
  const double t_mid = 0.5 * dt * static_cast<double>(n - 1);
  const double m = mean_of(x);
  double stt = 0.0, stx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double tc = dt * static_cast<double>(i) - t_mid;
    stt += tc * tc;
    stx += tc * (x[i] - m);
  }
  const double slope = stt > 0.0 ? stx / stt : 0.0;
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double tc = dt * static_cast<double>(i) - t_mid;
    out[i] = x[i] - m - slope * tc;
  }
  return out;
}

std::vector<double> design_lowpass_fir(double sample_rate_hz, double cutoff_hz, int taps) {
  require(sample_rate_hz > 0.0, Err::invalid_argument, "sample rate must be positive");
  require(cutoff_hz > 0.0 && cutoff_hz < sample_rate_hz / 2.0, Err::invalid_cutoff,
          "cutoff must lie in (0, fs/2)");
  require(taps >= 11 && taps % 2 == 1, Err::invalid_taps, "taps must be odd and >= 11");
  const int c = (taps - 1) / 2;
  const double fc = cutoff_hz / sample_rate_hz;  // normalized (cycles/sample)
  std::vector<double> h(static_cast<std::size_t>(taps));
  double sum = 0.0;
  for (int i = 0; i < taps; ++i) {
    const double k = static_cast<double>(i - c);
    const double x = 2.0 * fc * k;
    const double sinc = x == 0.0 ? 1.0 : std::sin(kPi * x) / (kPi * x);
    const double w = 0.54 - 0.46 * std::cos(2.0 * kPi * static_cast<double>(i) /
                                            static_cast<double>(taps - 1));
    h[static_cast<std::size_t>(i)] = 2.0 * fc * sinc * w;
    sum += h[static_cast<std::size_t>(i)];
  }
  for (double& v : h) v /= sum;  // exact unity DC gain
  return h;
}

std::vector<double> lowpass(const std::vector<double>& x, double sample_rate_hz,
                            double cutoff_hz, int taps) {
  require(x.size() >= 2, Err::too_short, "lowpass needs at least 2 samples");
  const std::vector<double> h = design_lowpass_fir(sample_rate_hz, cutoff_hz, taps);
  const std::size_t n = x.size();
  const std::size_t pad = std::min<std::size_t>(3 * (h.size() - 1), n - 1);

  // Odd reflection about the end values keeps level and slope continuous, so
  // edge transients stay out of the retained span.
  std::vector<double> ext;
  ext.reserve(n + 2 * pad);
  for (std::size_t i = 0; i < pad; ++i) ext.push_back(2.0 * x[0] - x[pad - i]);
  ext.insert(ext.end(), x.begin(), x.end());
  for (std::size_t i = 0; i < pad; ++i) ext.push_back(2.0 * x[n - 1] - x[n - 2 - i]);

  std::vector<double> a = fir_pass(ext, h);
  std::reverse(a.begin(), a.end());
  std::vector<double> b = fir_pass(a, h);
  std::reverse(b.begin(), b.end());

  // Forward and backward group delays cancel; the retained span lines up with
  // the original samples.
  return std::vector<double>(b.begin() + static_cast<std::ptrdiff_t>(pad),
                             b.begin() + static_cast<std::ptrdiff_t>(pad + n));
}

Normalized normalize(const std::vector<double>& x) {
  require(x.size() >= 2, Err::too_short, "normalize needs at least 2 samples");
  const std::size_t n = x.size();
  const double m = mean_of(x);
  double var = 0.0;
  for (double v : x) var += (v - m) * (v - m);
  var /= static_cast<double>(n);
  const double sd = std::sqrt(var);
  Normalized out;
  if (sd < 1e-12) {
    out.samples.assign(n, 0.0);
    out.near_constant = true;
    return out;
  }
  out.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.samples[i] = (x[i] - m) / sd;
  return out;
}

void fft_radix2(std::vector<std::complex<double>>& a) {
  const std::size_t n = a.size();
  require(n >= 1 && std::has_single_bit(n), Err::bad_pad_length,
          "FFT length must be a power of two");
  // Bit-reversal permutation.
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = -2.0 * kPi / static_cast<double>(len);
    const std::complex<double> wlen(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t j = 0; j < len / 2; ++j) {
        const std::complex<double> u = a[i + j];
        const std::complex<double> v = a[i + j + len / 2] * w;
        a[i + j] = u + v;
        a[i + j + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
}

Spectrum periodogram(const std::vector<double>& x, double sample_rate_hz,
                     std::size_t zero_pad_to) {
  require(!x.empty(), Err::invalid_argument, "periodogram needs a non-empty input");
  require(sample_rate_hz > 0.0, Err::invalid_argument, "sample rate must be positive");
  require(zero_pad_to >= x.size(), Err::bad_pad_length,
          "zero_pad_to must be >= the input length");
  require(std::has_single_bit(zero_pad_to), Err::bad_pad_length,
          "zero_pad_to must be a power of two");

  std::vector<std::complex<double>> buf(zero_pad_to, {0.0, 0.0});
  for (std::size_t i = 0; i < x.size(); ++i) buf[i] = {x[i], 0.0};
  fft_radix2(buf);

  const std::size_t half = zero_pad_to / 2;
  Spectrum s;
  s.resolution_hz = sample_rate_hz / static_cast<double>(zero_pad_to);
  s.source_length = x.size();
  s.bin_frequency_hz.resize(half + 1);
  s.power.resize(half + 1);
  const double inv_len = 1.0 / static_cast<double>(x.size());
  for (std::size_t k = 0; k <= half; ++k) {
    s.bin_frequency_hz[k] = s.resolution_hz * static_cast<double>(k);
    s.power[k] = std::norm(buf[k]) * inv_len;
  }
  return s;
}

DominantFrequency dominant_frequency(const Spectrum& spectrum, double band_lo_hz,
                                     double band_hi_hz) {
  require(!spectrum.power.empty(), Err::invalid_argument, "empty spectrum");
  const double nyquist = spectrum.bin_frequency_hz.back();
  require(band_lo_hz >= 0.0 && band_lo_hz < band_hi_hz && band_hi_hz <= nyquist + 1e-12,
          Err::empty_band, "band must satisfy 0 <= lo < hi <= Nyquist");
  const double res = spectrum.resolution_hz;
  const std::size_t last = spectrum.power.size() - 1;
  std::size_t k_lo = static_cast<std::size_t>(std::ceil(band_lo_hz / res - 1e-9));
  std::size_t k_hi_raw = static_cast<std::size_t>(std::floor(band_hi_hz / res + 1e-9));
  std::size_t k_hi = std::min(k_hi_raw, last);
  require(k_lo <= k_hi, Err::empty_band, "band contains no spectrum bin");

  double total = 0.0;  // excludes the DC bin
  for (std::size_t k = 1; k <= last; ++k) total += spectrum.power[k];

  DominantFrequency out;
  if (total < std::numeric_limits<double>::min()) {
    out.zero_power = true;
    return out;
  }

  std::size_t k_star = k_lo;
  for (std::size_t k = k_lo; k <= k_hi; ++k) {
    if (spectrum.power[k] > spectrum.power[k_star]) k_star = k;
  }
  double band = 0.0;
  for (std::size_t k = std::max<std::size_t>(k_lo, 1); k <= k_hi; ++k) band += spectrum.power[k];

  double freq = spectrum.bin_frequency_hz[k_star];
  if (k_star >= 1 && k_star < last) {
    const double alpha = spectrum.power[k_star - 1];
    const double beta = spectrum.power[k_star];
    const double gamma = spectrum.power[k_star + 1];
    const double denom = alpha - 2.0 * beta + gamma;
    if (std::abs(denom) > 1e-300) {
      double delta = 0.5 * (alpha - gamma) / denom;
      delta = std::clamp(delta, -0.5, 0.5);
      freq = (static_cast<double>(k_star) + delta) * res;
    }
  }
  out.frequency_hz = freq;
  out.peak_power = spectrum.power[k_star];
  out.band_power_ratio = band / total;
  return out;
}

}  // namespace breathsim::dsp
