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

#include "nvbang/lab.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <ostream>
#include <thread>

#include "format.hpp"
#include "nvbang/dynamics.hpp"
#include "nvbang/error.hpp"
#include "nvbang/pulse.hpp"
#include "nvbang/synth.hpp"

namespace nvbang::lab {
namespace {

using detail::format_number;
using model::SpinState;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Runs body(i) for i in [0, count) on a small pool. Results are written by
// index, so output order never depends on scheduling. The first exception is
// rethrown after all workers join.
template <typename Body>
void parallel_for(std::size_t count, unsigned threads, Body&& body) {
  unsigned workers = threads > 0 ? threads : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            body(i);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

double singular_window_ghz(double m_mhz) { return 2.0 * model::kSingularFraction * m_mhz * 1e-3; }

BiasSweepRow sweep_point(double d_ghz, double m_mhz, double b_ghz) {
  BiasSweepRow row;
  row.b_ghz = b_ghz;
  row.b_gauss = model::frequency_to_gauss(b_ghz);
  const model::SystemParams params(d_ghz, b_ghz, m_mhz);
  row.regime = model::regime(params);
  try {
    const synth::SynthesisResult result = synth::synthesize(params);
    const auto evolution = dynamics::evolve_pulse(result.pulse, params, dynamics::Levels::kThree);
    const std::vector<double> p = dynamics::populations(evolution.final_state);
    row.t_ns = result.total_ns;
    row.t_over_trwa = result.total_ns / synth::rwa_duration(m_mhz);
    row.p_minus1 = p[SpinState::kMinusOne];
    row.p_plus1 = p[SpinState::kPlusOne];
    row.p_zero = p[SpinState::kZero];
    row.n_swt = result.pulse.n_swt;
  } catch (const Error& e) {
    row.ok = false;
    row.error = e.what();
    row.t_ns = row.t_over_trwa = row.p_minus1 = row.p_plus1 = row.p_zero = kNaN;
  }
  return row;
}

}  // namespace

std::vector<double> linear_grid(double from, double to, double step) {
  if (!std::isfinite(from) || !std::isfinite(to) || !std::isfinite(step) || step <= 0.0) {
    throw InvalidParameter("grid needs finite bounds and a positive step");
  }
  std::vector<double> grid;
  const double span = (to - from) / step;
  if (span < -1e-9) return grid;
  const auto count = static_cast<std::size_t>(std::floor(span + 1e-9)) + 1;
  grid.reserve(count);
  for (std::size_t k = 0; k < count; ++k) grid.push_back(from + static_cast<double>(k) * step);
  return grid;
}

std::vector<double> bias_grid(double from_ghz, double to_ghz, double step_ghz, double d_ghz,
                              double m_mhz) {
  std::vector<double> grid = linear_grid(from_ghz, to_ghz, step_ghz);
  const double window = singular_window_ghz(m_mhz);
  std::erase_if(grid, [&](double b) { return std::abs(d_ghz - b) < window; });
  return grid;
}

std::vector<BiasSweepRow> sweep_bias(double d_ghz, double m_mhz, std::span<const double> b_grid,
                                     const SweepOptions& options) {
  // Validates D and M before any work.
  (void)model::SystemParams(d_ghz, 0.0, m_mhz);
  const double window = singular_window_ghz(m_mhz);
  for (double b : b_grid) {
    if (!std::isfinite(b)) throw InvalidParameter("bias grid contains a non-finite value");
    if (std::abs(d_ghz - b) < window) {
      throw InvalidParameter("bias grid point " + format_number(b) +
                             " GHz lies inside the singular window around b = D");
    }
  }
  std::vector<BiasSweepRow> rows(b_grid.size());
  parallel_for(b_grid.size(), options.threads,
               [&](std::size_t i) { rows[i] = sweep_point(d_ghz, m_mhz, b_grid[i]); });
  return rows;
}

std::vector<ResonantBias> resonant_biases(double d_ghz, int n_max, bool include_zero) {
  if (n_max < 1) throw InvalidParameter("n_max must be at least 1");
  std::vector<ResonantBias> out;
  if (include_zero) out.push_back({0, Branch::kBelowCrossing, 0.0});
  for (int n = 1; n <= n_max; ++n) {
    out.push_back({n, Branch::kBelowCrossing, n * d_ghz / (n + 1)});
    out.push_back({n, Branch::kAboveCrossing, (n + 1) * d_ghz / n});
  }
  return out;
}

std::vector<CutoffScanRow> cutoff_scan(double d_ghz, double b_ghz, double m_mhz,
                                       std::span<const double> nu_c_grid,
                                       const ScanOptions& options) {
  const model::SystemParams params(d_ghz, b_ghz, m_mhz);
  const synth::SynthesisResult result = synth::synthesize(params);
  const pulse::SampledWaveform waveform = pulse::to_waveform(result.pulse, options.dt_ns);

  std::vector<CutoffScanRow> rows(nu_c_grid.size());
  parallel_for(nu_c_grid.size(), options.threads, [&](std::size_t i) {
    const double nu_c = nu_c_grid[i];
    const bool bypass = !(nu_c > 0.0) || std::isinf(nu_c);
    const SpinState final_state = dynamics::evolve_waveform(
        bypass ? waveform : pulse::brick_wall_filter(waveform, nu_c), params, dynamics::Levels::kThree);
    const std::vector<double> p = dynamics::populations(final_state);
    rows[i] = {nu_c, p[SpinState::kMinusOne], p[SpinState::kPlusOne], p[SpinState::kZero]};
  });
  return rows;
}

std::vector<double> dip_locator(std::span<const BiasSweepRow> sweep, double depth) {
  std::vector<const BiasSweepRow*> rows;
  for (const BiasSweepRow& row : sweep) {
    if (row.ok) rows.push_back(&row);
  }
  if (rows.size() < 5) throw InvalidParameter("dip_locator needs at least five successful rows");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i]->b_ghz <= rows[i - 1]->b_ghz) throw InvalidParameter("sweep must be sorted by bias");
  }

  std::vector<double> dips;
  const std::size_t n = rows.size();
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double p = rows[i]->p_minus1;
    if (!(p < rows[i - 1]->p_minus1 && p <= rows[i + 1]->p_minus1)) continue;
    // Prominence: walk each side until P-1 drops below this minimum; the
    // shallower of the two highest points reached sets the reference.
    double left_peak = p;
    for (std::size_t k = i; k-- > 0 && rows[k]->p_minus1 >= p;) left_peak = std::max(left_peak, rows[k]->p_minus1);
    double right_peak = p;
    for (std::size_t k = i + 1; k < n && rows[k]->p_minus1 >= p; ++k) right_peak = std::max(right_peak, rows[k]->p_minus1);
    if (std::min(left_peak, right_peak) - p >= depth) dips.push_back(rows[i]->b_ghz);
  }
  return dips;
}

void write_sweep_csv(std::ostream& out, std::span<const BiasSweepRow> rows) {
  out << "b_ghz,b_gauss,regime,t_ns,t_over_trwa,p_minus1,p_plus1,n_swt\n";
  for (const BiasSweepRow& r : rows) {
    out << format_number(r.b_ghz) << ',' << format_number(r.b_gauss) << ','
        << (r.ok ? model::to_string(r.regime) : std::string_view("failed")) << ','
        << format_number(r.t_ns) << ',' << format_number(r.t_over_trwa) << ','
        << format_number(r.p_minus1) << ',' << format_number(r.p_plus1) << ',' << r.n_swt << '\n';
  }
}

void write_scan_csv(std::ostream& out, std::span<const CutoffScanRow> rows) {
  out << "nu_c_ghz,p_minus1,p_plus1\n";
  for (const CutoffScanRow& r : rows) {
    out << format_number(r.nu_c_ghz) << ',' << format_number(r.p_minus1) << ','
        << format_number(r.p_plus1) << '\n';
  }
}

}  // namespace nvbang::lab
