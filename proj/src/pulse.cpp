/* Copyright 2026 The nvbang Authors. All Rights Reserved.
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at
    http://www.apache.org/licenses/LICENSE-2.0
Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "nvbang/pulse.hpp"

#include <cmath>
#include <numeric>
#include <ostream>
#include <string>

#include "fft.hpp"
#include "format.hpp"
#include "nvbang/error.hpp"

namespace nvbang::pulse {
namespace {

using detail::format_number;

struct Bang {
  double start;
  double end;
  double value;
};

std::vector<Bang> bang_intervals(const BangBangPulse& pulse) {
  std::vector<Bang> bangs;
  double t = 0.0;
  for (int k = 1; k <= pulse.bang_count(); ++k) {
    const double duration = pulse.bang_duration_ns(k);
    if (duration > 0.0) bangs.push_back({t, t + duration, pulse.bang_field_mhz(k)});
    t += duration;
  }
  return bangs;
}

}  // namespace

double BangBangPulse::total_time_ns() const {
  if (n_swt <= 0) return t_i_ns;
  return t_i_ns + static_cast<double>(middle_bang_count()) * t_m_ns + t_f_ns;
}

double BangBangPulse::bang_duration_ns(int k) const {
  if (k == 1) return t_i_ns;
  if (k == n_swt + 1) return t_f_ns;
  return t_m_ns;
}

double BangBangPulse::bang_field_mhz(int k) const {
  return ((k - 1) % 2 == 0 ? 1.0 : -1.0) * static_cast<double>(first_sign) * m_mhz;
}

void BangBangPulse::validate() const {
  if (n_swt < 0) throw InvalidParameter("switching count must be non-negative");
  if (first_sign != 1 && first_sign != -1) throw InvalidParameter("first_sign must be +1 or -1");
  if (!(t_i_ns >= 0.0) || !(t_f_ns >= 0.0) || !(t_m_ns >= 0.0)) {
    throw InvalidParameter("bang durations must be non-negative");
  }
  if (!std::isfinite(m_mhz)) throw InvalidParameter("pulse amplitude must be finite");
}

double SampledWaveform::energy() const {
  return dt_ns * std::inner_product(samples_mhz.begin(), samples_mhz.end(), samples_mhz.begin(), 0.0);
}

Spectrum::Spectrum(double dt_ns, std::size_t transform_size, std::size_t sample_count,
                   std::vector<std::complex<double>> coefficients)
    : dt_ns_(dt_ns),
      transform_size_(transform_size),
      sample_count_(sample_count),
      coefficients_(std::move(coefficients)) {}

double Spectrum::bin_spacing_ghz() const {
  return 1.0 / (static_cast<double>(transform_size_) * dt_ns_);
}

double Spectrum::frequency_ghz(std::size_t k) const {
  return static_cast<double>(k) * bin_spacing_ghz();
}

std::vector<double> Spectrum::frequencies_ghz() const {
  std::vector<double> nu(coefficients_.size());
  for (std::size_t k = 0; k < nu.size(); ++k) nu[k] = frequency_ghz(k);
  return nu;
}

std::vector<double> Spectrum::magnitudes() const {
  std::vector<double> mag(coefficients_.size());
  for (std::size_t k = 0; k < mag.size(); ++k) mag[k] = std::abs(coefficients_[k]);
  return mag;
}

double Spectrum::energy() const {
  // Bins 1 .. ceil(N/2)-1 stand for a conjugate pair; DC and an even-N Nyquist bin do not.
  double sum = 0.0;
  for (std::size_t k = 0; k < coefficients_.size(); ++k) {
    const bool unpaired = k == 0 || (transform_size_ % 2 == 0 && k == transform_size_ / 2);
    sum += (unpaired ? 1.0 : 2.0) * std::norm(coefficients_[k]);
  }
  return dt_ns_ * sum / static_cast<double>(transform_size_);
}

SampledWaveform to_waveform(const BangBangPulse& pulse, double dt_ns, Sampling sampling) {
  pulse.validate();
  if (!(dt_ns > 0.0)) throw InvalidParameter("sample spacing dt must be positive");
  if (pulse.n_swt > 1 && dt_ns > pulse.t_m_ns / 20.0) {
    throw InvalidParameter("sample spacing dt = " + format_number(dt_ns) +
                           " ns is coarser than t_m/20 = " + format_number(pulse.t_m_ns / 20.0));
  }

  const double total = pulse.total_time_ns();
  const auto count = static_cast<std::size_t>(std::max(1.0, std::ceil(total / dt_ns - 1e-9)));
  // Shrink the spacing so the cells tile [0, T] exactly; a ragged last cell
  // would evolve past the pulse end.
  dt_ns = total / static_cast<double>(count);
  SampledWaveform w{dt_ns, std::vector<double>(count, 0.0)};
  const std::vector<Bang> bangs = bang_intervals(pulse);
  if (bangs.empty()) return w;
  const double tail_value = bangs.back().value;

  std::size_t k = 0;
  for (std::size_t j = 0; j < count; ++j) {
    const double a = static_cast<double>(j) * dt_ns;
    const double b = a + dt_ns;
    if (sampling == Sampling::kMidpoint) {
      const double mid = 0.5 * (a + b);
      while (k < bangs.size() && mid >= bangs[k].end) ++k;
      w.samples_mhz[j] = k < bangs.size() ? bangs[k].value : tail_value;
      continue;
    }
    while (k < bangs.size() && a >= bangs[k].end) ++k;
    if (k == bangs.size()) {
      w.samples_mhz[j] = tail_value;
      continue;
    }
    if (b <= bangs[k].end) {
      w.samples_mhz[j] = bangs[k].value;
      continue;
    }
    // The cell straddles at least one switching: area-weighted mean. Rounding
    // can leave the last cell a hair past T; that sliver keeps the final value.
    double area = 0.0;
    for (std::size_t m = k; m < bangs.size() && bangs[m].start < b; ++m) {
      area += bangs[m].value * (std::min(b, bangs[m].end) - std::max(a, bangs[m].start));
    }
    if (b > total) area += tail_value * (b - std::max(a, total));
    w.samples_mhz[j] = area / dt_ns;
  }
  return w;
}

Spectrum spectrum(const SampledWaveform& waveform, std::size_t zero_pad) {
  if (waveform.size() < 2) throw InvalidParameter("spectrum needs at least two samples");
  if (zero_pad < 1) throw InvalidParameter("zero-pad factor must be at least 1");
  std::vector<double> padded(waveform.size() * zero_pad, 0.0);
  std::copy(waveform.samples_mhz.begin(), waveform.samples_mhz.end(), padded.begin());
  return Spectrum(waveform.dt_ns, padded.size(), waveform.size(), fft::forward_real(padded));
}

SampledWaveform inverse(const Spectrum& spectrum) {
  std::vector<double> samples = fft::inverse_real(spectrum.coefficients(), spectrum.transform_size());
  const double scale = 1.0 / static_cast<double>(spectrum.transform_size());
  samples.resize(spectrum.sample_count());
  for (double& s : samples) s *= scale;
  return {spectrum.dt_ns(), std::move(samples)};
}

SampledWaveform brick_wall_filter(const SampledWaveform& waveform, double nu_c_ghz) {
  if (!(nu_c_ghz > 0.0)) throw InvalidParameter("cutoff frequency must be positive");
  if (waveform.size() < 2) return waveform;
  const Spectrum full = spectrum(waveform);
  std::vector<std::complex<double>> kept = full.coefficients();
  for (std::size_t k = 0; k < kept.size(); ++k) {
    if (full.frequency_ghz(k) > nu_c_ghz) kept[k] = 0.0;
  }
  return inverse(Spectrum(full.dt_ns(), full.transform_size(), full.sample_count(), std::move(kept)));
}

void write_waveform_csv(std::ostream& out, const SampledWaveform& waveform) {
  out << "t_ns,bx_mhz\n";
  for (std::size_t j = 0; j < waveform.size(); ++j) {
    out << format_number(waveform.time_ns(j)) << ',' << format_number(waveform.samples_mhz[j]) << '\n';
  }
}

void write_spectrum_csv(std::ostream& out, const Spectrum& spectrum, double max_ghz) {
  out << "nu_ghz,magnitude\n";
  const std::vector<double> mag = spectrum.magnitudes();
  for (std::size_t k = 0; k < mag.size(); ++k) {
    const double nu = spectrum.frequency_ghz(k);
    if (max_ghz > 0.0 && nu > max_ghz) break;
    out << format_number(nu) << ',' << format_number(mag[k]) << '\n';
  }
}

}  // namespace nvbang::pulse
