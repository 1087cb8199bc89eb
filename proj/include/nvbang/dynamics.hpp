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

// Lab-frame evolution of the NV spin under piecewise-constant x-fields.

#include <iosfwd>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "nvbang/model.hpp"
#include "nvbang/pulse.hpp"

namespace nvbang::dynamics {

using Propagator2 = Eigen::Matrix2cd;
using Propagator3 = Eigen::Matrix3cd;

enum class Levels { kTwo = 2, kThree = 3 };

/// Qubit propagator for a constant field bx over time t: a Bloch rotation about
/// (sqrt(2) bx, 0, 2E) by the angle omega_b t, omega_b = 2 pi sqrt(4E^2 + 2 bx^2).
Propagator2 propagator2(double half_gap_ghz, double bx_mhz, double t_ns);

/// Angular-frequency Hamiltonian D Sz^2 + b Sz + bx Sx in rad/ns, basis (+1, 0, -1).
Eigen::Matrix3d hamiltonian3(const model::SystemParams& params, double bx_mhz);

/// exp(-i H t) for the constant three-level Hamiltonian, via eigendecomposition.
Propagator3 propagator3(const model::SystemParams& params, double bx_mhz, double t_ns);

/// Max absolute entry of U^dagger U - I.
double unitarity_defect(const Eigen::MatrixXcd& u);

struct Trajectory {
  std::vector<double> t_ns;
  std::vector<model::SpinState> states;
  // Filled for two-level runs only.
  std::vector<model::BlochVector> bloch;
};

struct Evolution {
  model::SpinState final_state;
  std::optional<Trajectory> trajectory;
};

inline constexpr int kTrajectoryPointsPerBang = 32;

/// Starts from |down> (two levels) or |m_S = 0> (three levels) and applies the
/// exact propagator of every bang in order. A recorded trajectory holds t = 0
/// and 32 evenly spaced points per non-empty bang, the last on its boundary.
Evolution evolve_pulse(const pulse::BangBangPulse& pulse, const model::SystemParams& params,
                       Levels levels, bool record = false);

/// Each cell of the waveform is applied as a constant field over dt.
model::SpinState evolve_waveform(const pulse::SampledWaveform& waveform,
                                 const model::SystemParams& params, Levels levels);

/// Squared moduli in basis order: (P+1, P0, P-1) or (P_down, P_up).
std::vector<double> populations(const model::SpinState& state);

/// Pauli expectation values of a two-level state. Throws DimensionError otherwise.
model::BlochVector bloch(const model::SpinState& state);

/// |<up|psi>|^2 for a two-level state.
double transfer_fidelity(const model::SpinState& state);

/// Header `t_ns,p_plus1,p_0,p_minus1` plus `,bloch_x,bloch_y,bloch_z` when the
/// trajectory carries Bloch vectors. Two-level states report p_plus1 = 0.
void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory);

}  // namespace nvbang::dynamics
