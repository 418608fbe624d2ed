#pragma once

// Zero-quantum spectra from sampled trajectories: apodization, DC removal,
// zero-filled DFT in magnitude mode, peak picking and matching against
// predicted transition tables.

#include "spinchain/analytic.hpp"
#include "spinchain/dynamics.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <mutex>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace spinchain {

struct SpectrumMeta {
  double dt = 0.0;
  std::size_t n_samples = 0;
  int zero_pad_factor = 1;
  double tau = 0.0;  // apodization time constant, 0 if none
};

/// One-sided spectrum on the grid k / (N_padded dt), k = 0..N_padded/2.
struct Spectrum {
  std::vector<double> freq;
  std::vector<double> magnitude;
  SpectrumMeta meta;

  std::size_t n_padded() const { return meta.n_samples * static_cast<std::size_t>(meta.zero_pad_factor); }
  double bin_width() const { return 1.0 / (static_cast<double>(n_padded()) * meta.dt); }
  double max_magnitude() const {
    return magnitude.empty() ? 0.0 : *std::max_element(magnitude.begin(), magnitude.end());
  }
  /// Largest magnitude within [f - halfwidth, f + halfwidth].
  double peak_near(double f, double halfwidth) const {
    double best = 0.0;
    for (std::size_t i = 0; i < freq.size(); ++i) {
      if (std::abs(freq[i] - f) <= halfwidth) best = std::max(best, magnitude[i]);
    }
    return best;
  }
};

/// values[i] *= exp(-t_i / tau).
inline Trajectory apodize(Trajectory traj, double tau) {
  if (!(tau > 0.0)) throw std::invalid_argument("apodization time constant must be positive");
  for (std::size_t i = 0; i < traj.values.size(); ++i) traj.values[i] *= std::exp(-traj.time(i) / tau);
  traj.apodization_tau = tau;
  return traj;
}

/// Subtracts the arithmetic mean.
inline Trajectory remove_dc(Trajectory traj) {
  if (traj.values.empty()) throw std::invalid_argument("remove_dc: empty trajectory");
  const double mean = std::accumulate(traj.values.begin(), traj.values.end(), 0.0) / static_cast<double>(traj.values.size());
  for (double& v : traj.values) v -= mean;
  return traj;
}

namespace detail {

// FFTW planning is not thread-safe; execution of distinct plans is.
inline std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

/// Real-input DFT of `x` zero-filled to `n_padded`: X_k, k = 0..n_padded/2.
inline std::vector<std::complex<double>> real_dft(const std::vector<double>& x, std::size_t n_padded) {
  const std::size_t n_out = n_padded / 2 + 1;
  double* in = fftw_alloc_real(n_padded);
  fftw_complex* out = fftw_alloc_complex(n_out);
  fftw_plan plan;
  {
    std::lock_guard lock(fftw_planner_mutex());
    plan = fftw_plan_dft_r2c_1d(static_cast<int>(n_padded), in, out, FFTW_ESTIMATE);
  }
  std::fill(in, in + n_padded, 0.0);
  std::copy(x.begin(), x.end(), in);
  fftw_execute(plan);
  std::vector<std::complex<double>> result(n_out);
  for (std::size_t k = 0; k < n_out; ++k) result[k] = {out[k][0], out[k][1]};
  {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }
  fftw_free(in);
  fftw_free(out);
  return result;
}

inline Spectrum make_grid(const Trajectory& traj, int zero_pad) {
  if (traj.values.size() < 2) throw std::invalid_argument("spectrum needs at least two samples");
  if (zero_pad < 1) throw std::invalid_argument("zero-pad factor must be >= 1");
  Spectrum s;
  s.meta = {traj.dt, traj.values.size(), zero_pad, traj.apodization_tau};
  const std::size_t n_out = s.n_padded() / 2 + 1;
  s.freq.resize(n_out);
  const double df = s.bin_width();
  for (std::size_t k = 0; k < n_out; ++k) s.freq[k] = static_cast<double>(k) * df;
  return s;
}

}  // namespace detail

/// |DFT| of the zero-filled series, one-sided.
inline Spectrum magnitude_spectrum(const Trajectory& traj, int zero_pad = 4) {
  Spectrum s = detail::make_grid(traj, zero_pad);
  const auto x = detail::real_dft(traj.values, s.n_padded());
  s.magnitude.resize(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) s.magnitude[k] = std::abs(x[k]);
  return s;
}

/// Real (cosine) transform sum_i x_i cos(2 pi f_k t_i) on the same grid,
/// reported as its absolute value.
inline Spectrum cosine_transform(const Trajectory& traj, int zero_pad = 4) {
  Spectrum s = detail::make_grid(traj, zero_pad);
  const auto x = detail::real_dft(traj.values, s.n_padded());
  s.magnitude.resize(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) s.magnitude[k] = std::abs(x[k].real());
  return s;
}

struct Peak {
  double freq;       // Hz, refined
  double magnitude;  // at the grid maximum
  std::size_t bin;
};

namespace detail {

// Height of x[i] above the higher of the two lowest points reached before
// meeting a taller sample (or the edge) on either side.
inline double prominence(const std::vector<double>& x, std::size_t i) {
  double left_min = x[i];
  for (std::size_t j = i; j-- > 0;) {
    if (x[j] > x[i]) break;
    left_min = std::min(left_min, x[j]);
  }
  double right_min = x[i];
  for (std::size_t j = i + 1; j < x.size(); ++j) {
    if (x[j] > x[i]) break;
    right_min = std::min(right_min, x[j]);
  }
  return x[i] - std::max(left_min, right_min);
}

}  // namespace detail

/// Strict local maxima whose height and prominence both reach
/// rel_threshold * max, refined by a parabola through the log-magnitudes of
/// the three surrounding bins.
inline std::vector<Peak> pick_peaks(const Spectrum& s, double rel_threshold = 0.05) {
  if (!(rel_threshold > 0.0 && rel_threshold < 1.0)) throw std::invalid_argument("rel_threshold must lie in (0, 1)");
  std::vector<Peak> peaks;
  const auto& m = s.magnitude;
  if (m.size() < 3) return peaks;
  const double floor = rel_threshold * s.max_magnitude();
  if (!(floor > 0.0)) return peaks;
  const double df = m.size() > 1 ? s.freq[1] - s.freq[0] : 0.0;
  for (std::size_t i = 1; i + 1 < m.size(); ++i) {
    if (!(m[i] > m[i - 1] && m[i] > m[i + 1]) || m[i] < floor) continue;
    if (detail::prominence(m, i) < floor) continue;
    double offset = 0.0;
    if (m[i - 1] > 0.0 && m[i + 1] > 0.0) {
      const double a = std::log(m[i - 1]), b = std::log(m[i]), c = std::log(m[i + 1]);
      const double denom = a - 2.0 * b + c;
      if (denom < 0.0) offset = 0.5 * (a - c) / denom;
    }
    peaks.push_back({s.freq[i] + offset * df, m[i], i});
  }
  return peaks;
}

struct LineMatch {
  LineGroup line;
  std::optional<Peak> peak;
  double error = std::numeric_limits<double>::infinity();  // |f_peak - nu|, Hz
  bool matched = false;
  bool split = false;  // two or more peaks inside the split window
};

struct AdditivityCheck {
  int k, l, m;
  double residual;  // |f_km - (f_kl + f_lm)|, Hz
};

struct PeakMatchReport {
  std::vector<Peak> peaks;
  std::vector<LineMatch> matches;
  std::vector<LineGroup> unmatched_predictions;  // suppressed lines
  std::vector<Peak> unmatched_peaks;             // spurious lines
  std::vector<AdditivityCheck> additivity;
  double tolerance = 0.0;
  double split_window = 0.0;

  bool all_matched() const { return unmatched_predictions.empty(); }

  std::optional<double> matched_frequency(int k, int l) const {
    for (const auto& m : matches) {
      if (!m.matched) continue;
      for (const auto& [a, b] : m.line.members) {
        if (a == k && b == l) return m.peak->freq;
      }
    }
    return std::nullopt;
  }

  double max_additivity_residual() const {
    double r = 0.0;
    for (const auto& a : additivity) r = std::max(r, a.residual);
    return r;
  }
};

/// Greedy nearest-frequency assignment of peaks to the distinct predicted
/// lines: candidate pairs within tol_hz are taken in order of increasing
/// error, each peak and each line used at most once.
inline PeakMatchReport match_peaks(const std::vector<Peak>& peaks, const TransitionTable& predicted, double tol_hz) {
  if (!(tol_hz > 0.0)) throw std::invalid_argument("match tolerance must be positive");
  PeakMatchReport rep;
  rep.peaks = peaks;
  rep.tolerance = tol_hz;
  const auto lines = distinct_lines(predicted);

  double min_gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < lines.size(); ++i) min_gap = std::min(min_gap, lines[i].nu - lines[i - 1].nu);
  rep.split_window = std::isfinite(min_gap) ? std::max(tol_hz, 0.5 * min_gap) : tol_hz;

  struct Cand {
    double err;
    std::size_t line, peak;
  };
  std::vector<Cand> cands;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    for (std::size_t j = 0; j < peaks.size(); ++j) {
      const double err = std::abs(peaks[j].freq - lines[i].nu);
      if (err <= tol_hz) cands.push_back({err, i, j});
    }
  }
  std::stable_sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) { return a.err < b.err; });

  rep.matches.resize(lines.size());
  for (std::size_t i = 0; i < lines.size(); ++i) rep.matches[i].line = lines[i];
  std::vector<bool> peak_used(peaks.size(), false);
  for (const auto& c : cands) {
    auto& m = rep.matches[c.line];
    if (m.matched || peak_used[c.peak]) continue;
    m.matched = true;
    m.peak = peaks[c.peak];
    m.error = c.err;
    peak_used[c.peak] = true;
  }

  for (auto& m : rep.matches) {
    int near = 0;
    for (const auto& p : peaks) near += std::abs(p.freq - m.line.nu) <= rep.split_window ? 1 : 0;
    m.split = near >= 2;
    if (!m.matched) rep.unmatched_predictions.push_back(m.line);
  }
  for (std::size_t j = 0; j < peaks.size(); ++j) {
    if (!peak_used[j]) rep.unmatched_peaks.push_back(peaks[j]);
  }

  const int levels = static_cast<int>(predicted.levels.size());
  for (int k = 1; k <= levels; ++k) {
    for (int l = k + 1; l <= levels; ++l) {
      for (int m = l + 1; m <= levels; ++m) {
        const auto fkl = rep.matched_frequency(k, l), flm = rep.matched_frequency(l, m), fkm = rep.matched_frequency(k, m);
        if (fkl && flm && fkm) rep.additivity.push_back({k, l, m, std::abs(*fkm - (*fkl + *flm))});
      }
    }
  }
  return rep;
}

/// Peaks given directly as frequencies (e.g. published experimental lines).
inline std::vector<Peak> peaks_from_frequencies(const std::vector<double>& freqs) {
  std::vector<Peak> out;
  for (double f : freqs) out.push_back({f, 1.0, 0});
  return out;
}

}  // namespace spinchain
