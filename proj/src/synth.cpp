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

#include "nvbang/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "format.hpp"
#include "nvbang/dynamics.hpp"
#include "nvbang/error.hpp"

namespace nvbang::synth {
namespace {

using dynamics::Propagator2;
using model::Regime;
using model::SystemParams;
using pulse::BangBangPulse;

constexpr double kVerifyTolerance = 1e-6;

Propagator2 power(Propagator2 base, int exponent) {
  Propagator2 result = Propagator2::Identity();
  while (exponent > 0) {
    if (exponent & 1) result = base * result;
    base = base * base;
    exponent >>= 1;
  }
  return result;
}

struct BlochEnd {
  double x;
  double y;
  double z;

  double distance_to_north() const { return std::sqrt(x * x + y * y + (1.0 - z) * (1.0 - z)); }
};

// Final Bloch vector of |down> under the symmetric pulse +t_i, (-+)t_m ..., t_i.
class SymmetricShooter {
 public:
  SymmetricShooter(double half_gap_ghz, double drive_mhz, int n_swt)
      : half_gap_ghz_(half_gap_ghz), drive_mhz_(drive_mhz), n_swt_(n_swt) {}

  BlochEnd operator()(double t_i, double t_m) const {
    const Propagator2 first = dynamics::propagator2(half_gap_ghz_, drive_mhz_, t_i);
    const double last_field = (n_swt_ % 2 == 0 ? 1.0 : -1.0) * drive_mhz_;
    const Propagator2 last = dynamics::propagator2(half_gap_ghz_, last_field, t_i);

    // Middle bangs in time order are -, +, -, ...; pairs are (-) then (+).
    const int middle = std::max(0, n_swt_ - 1);
    Propagator2 body = Propagator2::Identity();
    if (middle > 0) {
      const Propagator2 minus = dynamics::propagator2(half_gap_ghz_, -drive_mhz_, t_m);
      const Propagator2 plus = dynamics::propagator2(half_gap_ghz_, drive_mhz_, t_m);
      body = power(plus * minus, middle / 2);
      if (middle % 2 == 1) body = minus * body;
    }
    const Eigen::Vector2cd psi = (last * body * first).col(model::SpinState::kDown);
    const std::complex<double> coherence = std::conj(psi(1)) * psi(0);
    return {2.0 * coherence.real(), 2.0 * coherence.imag(), std::norm(psi(1)) - std::norm(psi(0))};
  }

 private:
  double half_gap_ghz_;
  double drive_mhz_;
  int n_swt_;
};

struct Root {
  double t_i;
  double t_m;
  double residual;
};

// Damped Newton on the (x, y) components with the north-pole distance as merit,
// which keeps iterates away from the spurious (x, y) = 0 root at the south pole.
Root newton(const SymmetricShooter& shoot, double t_i, double t_m, double period_ns,
            int max_iterations) {
  const double h = 1e-6 * period_ns;
  const double max_step = 0.25 * period_ns;
  BlochEnd end = shoot(t_i, t_m);
  for (int it = 0; it < max_iterations && end.distance_to_north() > 1e-14; ++it) {
    const BlochEnd di_p = shoot(t_i + h, t_m);
    const BlochEnd di_m = shoot(t_i - h, t_m);
    const BlochEnd dm_p = shoot(t_i, t_m + h);
    const BlochEnd dm_m = shoot(t_i, t_m - h);
    Eigen::Matrix2d jac;
    jac << (di_p.x - di_m.x) / (2 * h), (dm_p.x - dm_m.x) / (2 * h),
           (di_p.y - di_m.y) / (2 * h), (dm_p.y - dm_m.y) / (2 * h);
    if (std::abs(jac.determinant()) < 1e-300) break;
    Eigen::Vector2d step = -jac.inverse() * Eigen::Vector2d(end.x, end.y);
    const double len = step.norm();
    if (!std::isfinite(len)) break;
    if (len > max_step) step *= max_step / len;

    double lambda = 1.0;
    bool improved = false;
    for (int k = 0; k < 30; ++k, lambda *= 0.5) {
      const BlochEnd trial = shoot(t_i + lambda * step(0), t_m + lambda * step(1));
      if (trial.distance_to_north() < end.distance_to_north()) {
        t_i += lambda * step(0);
        t_m += lambda * step(1);
        end = trial;
        improved = true;
        break;
      }
    }
    if (!improved) break;
  }
  return {t_i, t_m, end.distance_to_north()};
}

// Each bang moves the polar angle by at most twice the tilt of its axis, so
// fewer than pi / (2 tilt) bangs cannot reach the opposite pole.
int min_switches(const SystemParams& params) {
  const double tilt = std::atan2(std::numbers::sqrt2 * params.drive_ghz(),
                                 2.0 * std::abs(params.half_gap_ghz()));
  return std::max(1, static_cast<int>(std::ceil(std::numbers::pi / (2.0 * tilt) - 1.0 - 1e-9)));
}

double two_level_fidelity(const BangBangPulse& pulse, const SystemParams& params) {
  const auto evolution = dynamics::evolve_pulse(pulse, params, dynamics::Levels::kTwo);
  return dynamics::transfer_fidelity(evolution.final_state);
}

double round9(double value) { return std::stod(detail::format_number(value)); }

}  // namespace

double bloch_rate_ghz(const SystemParams& params) {
  const double e = params.half_gap_ghz();
  const double m = params.drive_ghz();
  return std::sqrt(4.0 * e * e + 2.0 * m * m);
}

double optimal_time_strong(const SystemParams& params) {
  if (model::regime(params) != Regime::kStrong) {
    throw RegimeError("optimal_time_strong needs the strong regime M >= sqrt(2)|E|");
  }
  // One full Bloch period.
  return 1.0 / bloch_rate_ghz(params);
}

SwitchingTimes strong_switching_times(const SystemParams& params) {
  if (model::regime(params) != Regime::kStrong) {
    throw RegimeError("strong switching times need the strong regime M >= sqrt(2)|E|");
  }
  const double e = params.half_gap_ghz();
  const double m = params.drive_ghz();
  const double arc = std::acos(std::clamp(2.0 * e * e / (m * m), -1.0, 1.0));
  // [pi -+ arccos(2E^2/M^2)] / (2 sqrt(E^2 + M^2/2)) with angular frequencies.
  const double denominator = 2.0 * kTwoPi * std::sqrt(e * e + 0.5 * m * m);
  return {(std::numbers::pi - arc) / denominator, (std::numbers::pi + arc) / denominator};
}

SynthesisResult synthesize_strong(const SystemParams& params) {
  const double total = optimal_time_strong(params);
  const SwitchingTimes t1 = strong_switching_times(params);
  std::ostringstream report;
  for (const double switch_ns : {t1.minus_branch_ns, t1.plus_branch_ns}) {
    BangBangPulse pulse;
    pulse.t_i_ns = switch_ns;
    pulse.t_f_ns = total - switch_ns;
    pulse.n_swt = 1;
    pulse.m_mhz = params.drive_mhz();
    const double fidelity = two_level_fidelity(pulse, params);
    if (fidelity >= 1.0 - kVerifyTolerance) {
      return {pulse, pulse.total_time_ns(), fidelity, Regime::kStrong};
    }
    report << " t1=" << switch_ns << " ns -> fidelity " << fidelity << ';';
  }
  throw SynthesisError("no strong-regime switching branch verified:" + report.str());
}

int weak_switch_limit(const SystemParams& params) {
  return static_cast<int>(std::ceil(2.0 * std::abs(params.qubit_gap_ghz()) / params.drive_ghz())) + 6;
}

std::optional<BangBangPulse> solve_weak_switches(const SystemParams& params, int n_swt,
                                                 const WeakSolverOptions& options) {
  // With one switching there is no middle bang and the symmetric ansatz leaves
  // one unknown for two conditions; the weak regime never needs it anyway.
  if (n_swt < 2) return std::nullopt;

  const double period = 1.0 / bloch_rate_ghz(params);
  const double t_m_lo = 0.5 * period;
  const double t_m_hi = period;
  const SymmetricShooter shoot(params.half_gap_ghz(), params.drive_mhz(), n_swt);

  std::optional<BangBangPulse> best;
  for (int i = 0; i < options.t_i_seeds; ++i) {
    const double fraction = (i + 0.5) / options.t_i_seeds;
    // Seed t_m at the grid point with the smallest residual for this t_i fraction.
    // The residual valley narrows like 1/n_swt, so the grid refines with it.
    const int t_m_count = std::max(options.t_m_seeds, 4 * n_swt);
    double seed_m = t_m_lo;
    double seed_d = 3.0;
    for (int j = 0; j < t_m_count; ++j) {
      const double t_m = t_m_lo + (t_m_hi - t_m_lo) * (j + 0.5) / t_m_count;
      const double d = shoot(fraction * t_m, t_m).distance_to_north();
      if (d < seed_d) seed_d = d, seed_m = t_m;
    }
    const Root root = newton(shoot, fraction * seed_m, seed_m, period, options.max_iterations);
    const bool in_window = root.t_m > t_m_lo && root.t_m < t_m_hi;
    const bool ordered = root.t_i > 0.0 && root.t_i <= root.t_m * (1.0 + 1e-12);
    if (root.residual >= options.residual_tolerance || !in_window || !ordered) continue;
    const BangBangPulse candidate{root.t_i, root.t_m, root.t_i, n_swt, 1, params.drive_mhz()};
    if (!best || candidate.total_time_ns() < best->total_time_ns()) best = candidate;
  }
  return best;
}

SynthesisResult synthesize_weak(const SystemParams& params, const WeakSolverOptions& options) {
  if (model::regime(params) != Regime::kWeak) {
    throw RegimeError("synthesize_weak needs the weak regime M < sqrt(2)|E|");
  }
  const int limit = options.max_switchings > 0 ? options.max_switchings : weak_switch_limit(params);
  const double half_period = 0.5 / bloch_rate_ghz(params);

  const int first = min_switches(params);
  std::optional<BangBangPulse> best;
  std::ostringstream trace;
  trace << " n_swt in [" << first << ", " << limit << "];";
  for (int n = first; n <= limit; ++n) {
    // Every middle bang exceeds half a Bloch period, so larger n cannot win.
    if (best && (n - 1) * half_period >= best->total_time_ns()) break;
    const std::optional<BangBangPulse> found = solve_weak_switches(params, n, options);
    trace << " n_swt=" << n << (found ? ":ok" : ":none") << ';';
    if (found && (!best || found->total_time_ns() < best->total_time_ns())) best = found;
  }
  if (!best) {
    throw InfeasibleError("no pole-to-pole bang-bang pulse found for b = " +
                          detail::format_number(params.bias_ghz()) + " GHz, M = " +
                          detail::format_number(params.drive_mhz()) + " MHz; scan:" + trace.str());
  }
  return {*best, best->total_time_ns(), two_level_fidelity(*best, params), Regime::kWeak};
}

SynthesisResult synthesize(const SystemParams& params) {
  switch (model::regime(params)) {
    case Regime::kStrong:
      return synthesize_strong(params);
    case Regime::kWeak:
      return synthesize_weak(params);
    case Regime::kSingular:
      break;
  }
  throw SingularPointError("the point E=0 is singular (b = D = " +
                           detail::format_number(params.anisotropy_ghz()) +
                           " GHz): the qubit levels cross and no bang-bang pulse is synthesized");
}

double rwa_duration(double drive_mhz) {
  if (!(drive_mhz > 0.0)) throw InvalidParameter("drive bound M must be positive");
  return std::numbers::sqrt2 / (2.0 * drive_mhz * 1e-3);
}

pulse::SampledWaveform rwa_waveform(const SystemParams& params, double dt_ns) {
  if (model::regime(params) == Regime::kSingular) {
    throw SingularPointError("the point E=0 is singular: no Larmor frequency to drive at");
  }
  if (!(dt_ns > 0.0)) throw InvalidParameter("sample spacing dt must be positive");
  const double duration = rwa_duration(params.drive_mhz());
  const auto count = static_cast<std::size_t>(std::max(1.0, std::ceil(duration / dt_ns - 1e-9)));
  dt_ns = duration / static_cast<double>(count);
  const double omega = kTwoPi * 2.0 * params.half_gap_ghz();
  const double m = params.drive_mhz();
  pulse::SampledWaveform w{dt_ns, std::vector<double>(count)};
  for (std::size_t j = 0; j < count; ++j) {
    const double a = static_cast<double>(j) * dt_ns;
    w.samples_mhz[j] = m * (std::sin(omega * (a + dt_ns)) - std::sin(omega * a)) / (omega * dt_ns);
  }
  return w;
}

std::string pulse_json(const SynthesisResult& result) {
  const BangBangPulse& p = result.pulse;
  nlohmann::ordered_json j;
  j["t_i_ns"] = round9(p.t_i_ns);
  j["t_m_ns"] = round9(p.t_m_ns);
  j["t_f_ns"] = round9(p.t_f_ns);
  j["n_swt"] = p.n_swt;
  j["first_sign"] = p.first_sign;
  j["m_mhz"] = round9(p.m_mhz);
  j["total_ns"] = round9(result.total_ns);
  j["fidelity_2lvl"] = round9(result.fidelity_2lvl);
  j["regime"] = std::string(model::to_string(result.regime));
  return j.dump(2);
}

}  // namespace nvbang::synth
