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

#pragma once

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <vector>

namespace nvbang::pulse {

/// Piecewise-constant control alternating between +M and -M.
///
/// Bang k (1-based) lasts t_i for k = 1, t_f for k = n_swt + 1 and t_m
/// otherwise, and carries the field first_sign * (-1)^(k-1) * M. With no
/// switching the pulse is a single bang of length t_i.
struct BangBangPulse {
  double t_i_ns = 0.0;
  double t_m_ns = 0.0;
  double t_f_ns = 0.0;
  int n_swt = 0;
  int first_sign = 1;
  double m_mhz = 0.0;

  int bang_count() const { return n_swt + 1; }
  int middle_bang_count() const { return n_swt > 1 ? n_swt - 1 : 0; }
  double total_time_ns() const;
  /// k is 1-based.
  double bang_duration_ns(int k) const;
  double bang_field_mhz(int k) const;

  /// Throws InvalidParameter on negative durations, n_swt < 0 or a sign other than +-1.
  void validate() const;
};

/// Sample j holds the control over the cell [j dt, (j + 1) dt).
struct SampledWaveform {
  double dt_ns = 0.0;
  std::vector<double> samples_mhz;

  std::size_t size() const { return samples_mhz.size(); }
  double duration_ns() const { return dt_ns * static_cast<double>(samples_mhz.size()); }
  /// Time of sample j, taken at the cell midpoint.
  double time_ns(std::size_t j) const { return (static_cast<double>(j) + 0.5) * dt_ns; }
  /// Sum of squared samples times dt (MHz^2 ns).
  double energy() const;
};

enum class Sampling {
  // Each cell carries the mean of the control over the cell. Cells that do not
  // straddle a switching hold exactly the bang value.
  kCellAverage,
  // Each cell carries the value of the bang containing the cell midpoint.
  kMidpoint,
};

/// Discrete Fourier coefficients X_k = sum_j x_j exp(-2 pi i j k / N) of a
/// (possibly zero-padded) real waveform, kept on the non-negative half axis
/// k = 0 .. N/2.
class Spectrum {
 public:
  Spectrum(double dt_ns, std::size_t transform_size, std::size_t sample_count,
           std::vector<std::complex<double>> coefficients);

  double dt_ns() const { return dt_ns_; }
  std::size_t transform_size() const { return transform_size_; }
  std::size_t sample_count() const { return sample_count_; }
  const std::vector<std::complex<double>>& coefficients() const { return coefficients_; }

  std::size_t bin_count() const { return coefficients_.size(); }
  double bin_spacing_ghz() const;
  double frequency_ghz(std::size_t k) const;
  std::vector<double> frequencies_ghz() const;
  std::vector<double> magnitudes() const;
  /// Waveform energy recovered through Parseval's identity.
  double energy() const;

 private:
  double dt_ns_;
  std::size_t transform_size_;
  std::size_t sample_count_;
  std::vector<std::complex<double>> coefficients_;
};

/// Samples over exactly [0, T]: the returned spacing is T / ceil(T / dt), never
/// above the requested dt. Throws InvalidParameter if dt <= 0 or, for more
/// than one switching, dt > t_m / 20.
SampledWaveform to_waveform(const BangBangPulse& pulse, double dt_ns,
                            Sampling sampling = Sampling::kCellAverage);

/// zero_pad >= 1 multiplies the transform length; padding only refines the grid.
Spectrum spectrum(const SampledWaveform& waveform, std::size_t zero_pad = 1);

/// Inverse transform truncated to the original sample count.
SampledWaveform inverse(const Spectrum& spectrum);

/// Zeroes every Fourier component above nu_c (DC kept) and transforms back on
/// the same grid. Output may overshoot M near switchings.
SampledWaveform brick_wall_filter(const SampledWaveform& waveform, double nu_c_ghz);

/// Header `t_ns,bx_mhz`.
void write_waveform_csv(std::ostream& out, const SampledWaveform& waveform);
/// Header `nu_ghz,magnitude`; bins above max_ghz are dropped when max_ghz > 0.
void write_spectrum_csv(std::ostream& out, const Spectrum& spectrum, double max_ghz = 0.0);

}  // namespace nvbang::pulse
