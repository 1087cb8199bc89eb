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

// Time-optimal single-axis bang-bang pulses that take the effective qubit from
// |down> (m_S = 0) to |up> (m_S = -1), plus the resonant sinusoidal baseline.

#include <optional>
#include <string>
#include <vector>

#include "nvbang/model.hpp"
#include "nvbang/pulse.hpp"

namespace nvbang::synth {

struct SynthesisResult {
  pulse::BangBangPulse pulse;
  double total_ns = 0.0;
  /// Transfer probability from re-simulating the pulse on the qubit.
  double fidelity_2lvl = 0.0;
  model::Regime regime = model::Regime::kSingular;
};

/// Both roots of the single switching time in the strong regime.
struct SwitchingTimes {
  double minus_branch_ns;
  double plus_branch_ns;
};

struct WeakSolverOptions {
  /// Largest switching count scanned; 0 selects ceil(2 * 2|E| / M) + 6.
  int max_switchings = 0;
  /// Accepted distance between the final Bloch vector and the north pole.
  double residual_tolerance = 1e-10;
  int t_i_seeds = 8;
  int t_m_seeds = 24;
  int max_iterations = 80;
};

/// Bloch precession rate sqrt(4E^2 + 2M^2) at full drive, cyclic GHz.
double bloch_rate_ghz(const model::SystemParams& params);

/// T = pi / sqrt(E^2 + M^2/2) in angular units. Throws RegimeError outside the strong regime.
double optimal_time_strong(const model::SystemParams& params);

SwitchingTimes strong_switching_times(const model::SystemParams& params);

/// One switching; the minus branch is returned when both verify.
SynthesisResult synthesize_strong(const model::SystemParams& params);

int weak_switch_limit(const model::SystemParams& params);

/// Shortest symmetric (t_f = t_i) pole-to-pole pulse with exactly n_swt
/// switchings, or nothing if the shooting solve finds none.
std::optional<pulse::BangBangPulse> solve_weak_switches(const model::SystemParams& params, int n_swt,
                                                        const WeakSolverOptions& options = {});

/// Scans switching counts and returns the shortest feasible pulse. Throws
/// InfeasibleError with the scan trace when nothing converges.
SynthesisResult synthesize_weak(const model::SystemParams& params,
                                const WeakSolverOptions& options = {});

/// Dispatch on regime. Throws SingularPointError at E = 0.
SynthesisResult synthesize(const model::SystemParams& params);

/// sqrt(2) pi / M with M angular, i.e. sqrt(2) / (2 M) in cyclic units.
double rwa_duration(double drive_mhz);

/// M cos(2E t) over rwa_duration(M), cell-averaged like pulse::to_waveform.
pulse::SampledWaveform rwa_waveform(const model::SystemParams& params, double dt_ns);

/// Fields t_i_ns, t_m_ns, t_f_ns, n_swt, first_sign, m_mhz, total_ns, fidelity_2lvl, regime.
std::string pulse_json(const SynthesisResult& result);

}  // namespace nvbang::synth
