#include "core/features.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "core/dsp.hpp"

namespace breathsim::features {

namespace {

double rms_of(const std::vector<double>& x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s / static_cast<double>(x.size()));
}

double variance_of(const std::vector<double>& x) {
  double m = 0.0;
  for (double v : x) m += v;
  m /= static_cast<double>(x.size());
  double var = 0.0;
  for (double v : x) var += (v - m) * (v - m);
  return var / static_cast<double>(x.size());
}

double zero_crossings_per_second(const std::vector<double>& z, double fs) {
  std::size_t count = 0;
  for (std::size_t i = 1; i < z.size(); ++i) {
    const bool prev_neg = z[i - 1] < 0.0;
    const bool cur_neg = z[i] < 0.0;
    if (prev_neg != cur_neg) ++count;
  }
  return static_cast<double>(count) * fs / static_cast<double>(z.size());
}

// Shannon entropy of the non-DC power distribution, normalized to [0, 1].
double spectral_entropy(const dsp::Spectrum& s) {
  const std::size_t last = s.power.size() - 1;
  if (last < 1) return 0.0;
  double total = 0.0;
  for (std::size_t k = 1; k <= last; ++k) total += s.power[k];
  if (total <= 0.0) return 0.0;
  double h = 0.0;
  for (std::size_t k = 1; k <= last; ++k) {
    const double p = s.power[k] / total;
    if (p > 0.0) h -= p * std::log(p);
  }
  return h / std::log(static_cast<double>(last));
}

struct AutocorrPeak {
  double value = 0.0;
  double lag_s = 0.0;
};

AutocorrPeak autocorr_peak(const std::vector<double>& z, double fs, double lag_min_s,
                           double lag_max_s) {
  const std::size_t n = z.size();
  double energy = 0.0;
  for (double v : z) energy += v * v;
  AutocorrPeak out;
  if (energy <= 0.0) return out;
  std::size_t lag_lo = static_cast<std::size_t>(std::llround(lag_min_s * fs));
  std::size_t lag_hi = static_cast<std::size_t>(std::llround(lag_max_s * fs));
  lag_lo = std::max<std::size_t>(lag_lo, 1);
  lag_hi = std::min<std::size_t>(lag_hi, n >= 2 ? n - 2 : 0);
  if (lag_lo > lag_hi) return out;
  double best = -std::numeric_limits<double>::infinity();
  std::size_t best_lag = lag_lo;
  for (std::size_t lag = lag_lo; lag <= lag_hi; ++lag) {
    double s = 0.0;
    for (std::size_t i = 0; i + lag < n; ++i) s += z[i] * z[i + lag];
    const double r = s / energy;
    if (r > best) {
      best = r;
      best_lag = lag;
    }
  }
  out.value = best;
  out.lag_s = static_cast<double>(best_lag) / fs;
  return out;
}

// Local maxima filtered by spacing (higher peak wins) and then by prominence
// measured against the surrounding minima.
std::size_t count_peaks(const std::vector<double>& z, double fs, double min_prominence,
                        double min_spacing_s) {
  const std::size_t n = z.size();
  std::vector<std::size_t> maxima;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (z[i] > z[i - 1] && z[i] >= z[i + 1]) maxima.push_back(i);
  }
  if (maxima.empty()) return 0;

  // Spacing filter: visit by descending height, drop candidates within the
  // spacing window of a kept peak.
  std::vector<std::size_t> order(maxima.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (z[maxima[a]] != z[maxima[b]]) return z[maxima[a]] > z[maxima[b]];
    return maxima[a] < maxima[b];
  });
  const double min_spacing = min_spacing_s * fs;
  std::vector<bool> kept(maxima.size(), false);
  std::vector<std::size_t> kept_pos;
  for (std::size_t oi : order) {
    const std::size_t pos = maxima[oi];
    bool ok = true;
    for (std::size_t kp : kept_pos) {
      const double d = pos > kp ? static_cast<double>(pos - kp) : static_cast<double>(kp - pos);
      if (d < min_spacing) {
        ok = false;
        break;
      }
    }
    if (ok) {
      kept[oi] = true;
      kept_pos.push_back(pos);
    }
  }

  std::size_t count = 0;
  for (std::size_t oi = 0; oi < maxima.size(); ++oi) {
    if (!kept[oi]) continue;
    const std::size_t p = maxima[oi];
    const double h = z[p];
    double left_min = h;
    for (std::size_t i = p; i-- > 0;) {
      if (z[i] > h) break;
      left_min = std::min(left_min, z[i]);
    }
    double right_min = h;
    for (std::size_t i = p + 1; i < n; ++i) {
      if (z[i] > h) break;
      right_min = std::min(right_min, z[i]);
    }
    const double prominence = h - std::max(left_min, right_min);
    if (prominence >= min_prominence) ++count;
  }
  return count;
}

}  // namespace

const std::array<std::string, kFeatureCount>& feature_names() {
  static const std::array<std::string, kFeatureCount> names = {
      "est_rate_bpm",      "band_power_ratio", "rms_amplitude",
      "peak_to_peak",      "variance",         "zero_crossing_rate",
      "spectral_entropy",  "autocorr_peak_value", "autocorr_peak_lag_s",
      "peaks_per_minute",  "crest_factor",     "near_constant_flag"};
  return names;
}

FeatureVector extract_features(const std::vector<double>& samples, double sample_rate_hz,
                               const DspConfig& config) {
  require(sample_rate_hz > 0.0, Err::invalid_argument, "sample rate must be positive");
  const double duration_s = static_cast<double>(samples.size()) / sample_rate_hz;
  require(duration_s >= 10.0, Err::too_short, "recording must cover at least 10 s");

  const std::vector<double> conditioned =
      dsp::lowpass(dsp::detrend(samples, sample_rate_hz), sample_rate_hz,
                   config.lowpass_cutoff_hz, config.lowpass_taps);
  const dsp::Normalized norm = dsp::normalize(conditioned);
  const std::vector<double>& z = norm.samples;

  const std::size_t pad =
      dsp::next_pow2(std::max<std::size_t>(config.min_pad, samples.size()));
  const dsp::Spectrum spectrum = dsp::periodogram(z, sample_rate_hz, pad);
  const double band_hi = std::min(config.band_hi_hz, sample_rate_hz / 2.0);
  const dsp::DominantFrequency dom =
      dsp::dominant_frequency(spectrum, config.band_lo_hz, band_hi);

  const double band_ratio = dom.zero_power ? 0.0 : dom.band_power_ratio;
  const bool rate_gated =
      norm.near_constant || dom.zero_power || band_ratio < config.rate_gate_band_ratio;

  const double rms = rms_of(conditioned);
  const auto [min_it, max_it] = std::minmax_element(conditioned.begin(), conditioned.end());
  const double peak_to_peak = *max_it - *min_it;
  double max_abs = 0.0;
  for (double v : conditioned) max_abs = std::max(max_abs, std::abs(v));

  const AutocorrPeak ac = autocorr_peak(z, sample_rate_hz, config.autocorr_lag_min_s,
                                        config.autocorr_lag_max_s);
  const std::size_t peaks =
      count_peaks(z, sample_rate_hz, config.peak_prominence, config.peak_min_spacing_s);

  FeatureVector f{};
  f[0] = rate_gated ? 0.0 : 60.0 * dom.frequency_hz;
  f[1] = band_ratio;
  f[2] = rms;
  f[3] = peak_to_peak;
  f[4] = variance_of(conditioned);
  f[5] = zero_crossings_per_second(z, sample_rate_hz);
  f[6] = spectral_entropy(spectrum);
  f[7] = ac.value;
  f[8] = ac.lag_s;
  f[9] = static_cast<double>(peaks) * 60.0 / duration_s;
  f[10] = norm.near_constant || rms <= 0.0 ? 0.0 : max_abs / rms;
  f[11] = norm.near_constant ? 1.0 : 0.0;

  for (double v : f)
    require(std::isfinite(v), Err::invalid_argument, "non-finite feature value");
  return f;
}

}  // namespace breathsim::features
