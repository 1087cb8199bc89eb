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

#include "nvbang/dynamics.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <ostream>

#include "format.hpp"
#include "nvbang/error.hpp"

namespace nvbang::dynamics {
namespace {

using model::SpinState;
using cd = std::complex<double>;

constexpr cd kI{0.0, 1.0};

Eigen::VectorXcd initial_amplitudes(Levels levels) {
  return levels == Levels::kTwo ? SpinState::qubit_down().amplitudes()
                                : SpinState::ms_zero().amplitudes();
}

Eigen::MatrixXcd constant_propagator(const model::SystemParams& params, Levels levels,
                                     double bx_mhz, double t_ns) {
  if (levels == Levels::kTwo) return propagator2(params.half_gap_ghz(), bx_mhz, t_ns);
  return propagator3(params, bx_mhz, t_ns);
}

SpinState make_state(Eigen::VectorXcd psi) { return SpinState(std::move(psi)); }

// Bang-bang pulses reuse the same (field, duration) pairs: at most +-M times
// {t_i, t_m, t_f}.
class PropagatorCache {
 public:
  PropagatorCache(const model::SystemParams& params, Levels levels)
      : params_(params), levels_(levels) {}

  const Eigen::MatrixXcd& get(double bx_mhz, double t_ns) {
    for (const Entry& e : entries_) {
      if (e.bx_mhz == bx_mhz && e.t_ns == t_ns) return e.u;
    }
    entries_.push_back({bx_mhz, t_ns, constant_propagator(params_, levels_, bx_mhz, t_ns)});
    return entries_.back().u;
  }

 private:
  struct Entry {
    double bx_mhz;
    double t_ns;
    Eigen::MatrixXcd u;
  };
  const model::SystemParams& params_;
  Levels levels_;
  std::vector<Entry> entries_;
};

}  // namespace

Propagator2 propagator2(double half_gap_ghz, double bx_mhz, double t_ns) {
  const double ox = kTwoPi * std::numbers::sqrt2 * bx_mhz * 1e-3;
  const double oz = kTwoPi * 2.0 * half_gap_ghz;
  const double omega = std::hypot(ox, oz);
  if (omega == 0.0) return Propagator2::Identity();
  const double nx = ox / omega;
  const double nz = oz / omega;
  const double c = std::cos(0.5 * omega * t_ns);
  const double s = std::sin(0.5 * omega * t_ns);
  // cos I - i sin (n . sigma) with sigma_z = diag(-1, +1) in the (down, up) basis.
  Propagator2 u;
  u << cd(c, s * nz), cd(0.0, -s * nx),
       cd(0.0, -s * nx), cd(c, -s * nz);
  return u;
}

Eigen::Matrix3d hamiltonian3(const model::SystemParams& params, double bx_mhz) {
  const double d = params.anisotropy_ghz();
  const double b = params.bias_ghz();
  const double x = bx_mhz * 1e-3 / std::numbers::sqrt2;
  Eigen::Matrix3d h;
  h << d + b, x, 0.0,
       x, 0.0, x,
       0.0, x, d - b;
  return kTwoPi * h;
}

Propagator3 propagator3(const model::SystemParams& params, double bx_mhz, double t_ns) {
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(hamiltonian3(params, bx_mhz));
  const Eigen::Matrix3d& v = eig.eigenvectors();
  Eigen::Vector3cd phases;
  for (int i = 0; i < 3; ++i) phases(i) = std::exp(-kI * eig.eigenvalues()(i) * t_ns);
  return v.cast<cd>() * phases.asDiagonal() * v.transpose().cast<cd>();
}

double unitarity_defect(const Eigen::MatrixXcd& u) {
  const Eigen::MatrixXcd defect = u.adjoint() * u - Eigen::MatrixXcd::Identity(u.rows(), u.cols());
  return defect.cwiseAbs().maxCoeff();
}

Evolution evolve_pulse(const pulse::BangBangPulse& pulse, const model::SystemParams& params,
                       Levels levels, bool record) {
  pulse.validate();
  Eigen::VectorXcd psi = initial_amplitudes(levels);

  if (!record) {
    PropagatorCache cache(params, levels);
    for (int k = 1; k <= pulse.bang_count(); ++k) {
      const double duration = pulse.bang_duration_ns(k);
      if (duration <= 0.0) continue;
      psi = cache.get(pulse.bang_field_mhz(k), duration) * psi;
    }
    return {make_state(std::move(psi)), std::nullopt};
  }

  Trajectory traj;
  const auto push = [&](double t, const Eigen::VectorXcd& amplitudes) {
    SpinState state = make_state(amplitudes);
    if (levels == Levels::kTwo) traj.bloch.push_back(bloch(state));
    traj.t_ns.push_back(t);
    traj.states.push_back(std::move(state));
  };
  push(0.0, psi);
  double t = 0.0;
  for (int k = 1; k <= pulse.bang_count(); ++k) {
    const double duration = pulse.bang_duration_ns(k);
    if (duration <= 0.0) continue;
    const double step = duration / kTrajectoryPointsPerBang;
    const Eigen::MatrixXcd u = constant_propagator(params, levels, pulse.bang_field_mhz(k), step);
    const Eigen::VectorXcd start = psi;
    for (int i = 1; i <= kTrajectoryPointsPerBang; ++i) {
      psi = u * psi;
      push(i == kTrajectoryPointsPerBang ? t + duration : t + i * step, psi);
    }
    // The bang endpoint comes from one exact propagator, not 32 small ones.
    psi = constant_propagator(params, levels, pulse.bang_field_mhz(k), duration) * start;
    t += duration;
  }
  return {make_state(std::move(psi)), std::move(traj)};
}

SpinState evolve_waveform(const pulse::SampledWaveform& waveform, const model::SystemParams& params,
                          Levels levels) {
  Eigen::VectorXcd psi = initial_amplitudes(levels);
  for (double bx : waveform.samples_mhz) {
    if (levels == Levels::kTwo) {
      psi = propagator2(params.half_gap_ghz(), bx, waveform.dt_ns) * psi;
    } else {
      psi = propagator3(params, bx, waveform.dt_ns) * psi;
    }
  }
  return make_state(std::move(psi));
}

std::vector<double> populations(const SpinState& state) {
  std::vector<double> p(static_cast<std::size_t>(state.dimension()));
  for (int i = 0; i < state.dimension(); ++i) p[static_cast<std::size_t>(i)] = std::norm(state.amplitudes()(i));
  return p;
}

model::BlochVector bloch(const SpinState& state) {
  if (state.dimension() != 2) {
    throw DimensionError("Bloch vector needs a two-level state, got dimension " +
                         std::to_string(state.dimension()));
  }
  const cd down = state.amplitudes()(SpinState::kDown);
  const cd up = state.amplitudes()(SpinState::kUp);
  const cd coherence = std::conj(up) * down;
  return {2.0 * coherence.real(), 2.0 * coherence.imag(), std::norm(up) - std::norm(down)};
}

double transfer_fidelity(const SpinState& state) {
  if (state.dimension() != 2) throw DimensionError("transfer fidelity needs a two-level state");
  return std::norm(state.amplitudes()(SpinState::kUp));
}

void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory) {
  using detail::format_number;
  const bool with_bloch = !trajectory.bloch.empty();
  out << "t_ns,p_plus1,p_0,p_minus1";
  if (with_bloch) out << ",bloch_x,bloch_y,bloch_z";
  out << '\n';
  for (std::size_t i = 0; i < trajectory.t_ns.size(); ++i) {
    const std::vector<double> p = populations(trajectory.states[i]);
    const bool three = p.size() == 3;
    const double p_plus = three ? p[SpinState::kPlusOne] : 0.0;
    const double p_zero = three ? p[SpinState::kZero] : p[SpinState::kDown];
    const double p_minus = three ? p[SpinState::kMinusOne] : p[SpinState::kUp];
    out << format_number(trajectory.t_ns[i]) << ',' << format_number(p_plus) << ','
        << format_number(p_zero) << ',' << format_number(p_minus);
    if (with_bloch) {
      const model::BlochVector& r = trajectory.bloch[i];
      out << ',' << format_number(r.x) << ',' << format_number(r.y) << ',' << format_number(r.z);
    }
    out << '\n';
  }
}

}  // namespace nvbang::dynamics
