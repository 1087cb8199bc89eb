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

#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "nvbang/dynamics.hpp"
#include "nvbang/error.hpp"
#include "nvbang/model.hpp"
#include "nvbang/pulse.hpp"
#include "nvbang/synth.hpp"

namespace nvbang::synth {
namespace {

using model::Regime;
using model::SystemParams;
using pulse::BangBangPulse;

constexpr double kD = 2.87;

SystemParams at_half_gap(double e_ghz, double m_mhz) { return {kD, kD - 2.0 * e_ghz, m_mhz}; }

using Vec3 = std::array<double, 3>;

// Rotates v about the unit axis n by angle theta (right-handed).
Vec3 rodrigues(const Vec3& v, const Vec3& n, double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const double dot = n[0] * v[0] + n[1] * v[1] + n[2] * v[2];
  const Vec3 cross = {n[1] * v[2] - n[2] * v[1], n[2] * v[0] - n[0] * v[2], n[0] * v[1] - n[1] * v[0]};
  Vec3 out;
  for (int i = 0; i < 3; ++i) out[i] = v[i] * c + cross[i] * s + n[i] * dot * (1.0 - c);
  return out;
}

// Bloch-vector oracle, independent of the library propagators: each bang turns
// the vector about (sqrt(2) bx, 0, 2E) at the rate sqrt(4E^2 + 2 bx^2), angular.
double oracle_fidelity(const BangBangPulse& p, double e_ghz) {
  Vec3 v = {0.0, 0.0, -1.0};
  for (int k = 1; k <= p.bang_count(); ++k) {
    const double bx = p.bang_field_mhz(k) * 1e-3;
    const double ax = std::sqrt(2.0) * bx;
    const double az = 2.0 * e_ghz;
    const double rate = std::hypot(ax, az);
    v = rodrigues(v, {ax / rate, 0.0, az / rate}, kTwoPi * rate * p.bang_duration_ns(k));
  }
  return 0.5 * (1.0 + v[2]);
}

TEST_CASE("strong-regime optimal time") {
  CHECK(optimal_time_strong(at_half_gap(0.05, 200.0)) == doctest::Approx(3.333333333).epsilon(1e-9));
  CHECK(optimal_time_strong(at_half_gap(0.1, 1000.0)) ==
        doctest::Approx(1.0 / (2.0 * std::sqrt(0.51))).epsilon(1e-12));
  CHECK(optimal_time_strong(at_half_gap(0.1, 1000.0)) == doctest::Approx(0.700).epsilon(1e-3));
  // Approaching the crossing the time tends to the rotating-wave duration.
  const double t = optimal_time_strong(at_half_gap(1e-5 * 0.2, 200.0));
  CHECK(std::abs(t / rwa_duration(200.0) - 1.0) < 1e-9);
  CHECK(std::abs(t - 3.536) <= 5e-4);
  CHECK_THROWS_AS(optimal_time_strong(at_half_gap(0.7175, 200.0)), RegimeError);
}

TEST_CASE("optimal time equals one Bloch period") {
  for (double e : {-0.12, 0.01, 0.05, 0.1}) {
    const SystemParams p = at_half_gap(e, 200.0);
    CHECK(optimal_time_strong(p) == doctest::Approx(1.0 / bloch_rate_ghz(p)).epsilon(1e-14));
  }
}

TEST_CASE("strong switching times") {
  const SwitchingTimes t = strong_switching_times(at_half_gap(0.05, 200.0));
  CHECK(t.minus_branch_ns == doctest::Approx(0.900).epsilon(1e-3));
  CHECK(t.plus_branch_ns == doctest::Approx(2.434).epsilon(1e-3));
  const double expected_minus = (std::numbers::pi - std::acos(0.125)) / (kTwoPi * 0.3);
  CHECK(t.minus_branch_ns == doctest::Approx(expected_minus).epsilon(1e-13));
}

TEST_CASE("both strong branches transfer the qubit") {
  const SystemParams p = at_half_gap(0.05, 200.0);
  const SwitchingTimes t = strong_switching_times(p);
  const double total = optimal_time_strong(p);
  for (double t1 : {t.minus_branch_ns, t.plus_branch_ns}) {
    const BangBangPulse candidate{t1, 0.0, total - t1, 1, 1, 200.0};
    CHECK(oracle_fidelity(candidate, p.half_gap_ghz()) >= 1.0 - 1e-6);
  }
}

TEST_CASE("strong synthesis returns the minus branch") {
  const SystemParams p = at_half_gap(0.05, 200.0);
  const SynthesisResult r = synthesize_strong(p);
  CHECK(r.regime == Regime::kStrong);
  CHECK(r.pulse.n_swt == 1);
  CHECK(r.pulse.t_i_ns == doctest::Approx(strong_switching_times(p).minus_branch_ns).epsilon(1e-14));
  CHECK(std::abs(r.total_ns - r.pulse.total_time_ns()) <= 1e-12);
  CHECK(std::abs(r.total_ns - 3.333333333333) < 1e-9);
  CHECK(r.fidelity_2lvl >= 1.0 - 1e-6);
  CHECK_THROWS_AS(synthesize_strong(at_half_gap(0.7175, 200.0)), RegimeError);
}

TEST_CASE("regime boundary gives a symmetric two-bang pulse") {
  const double m = 200.0;
  const SystemParams p = at_half_gap(0.2 / std::sqrt(2.0), m);
  REQUIRE(model::regime(p) == Regime::kStrong);
  const SwitchingTimes t = strong_switching_times(p);
  const double total = optimal_time_strong(p);
  CHECK(t.minus_branch_ns == doctest::Approx(0.5 * total).epsilon(1e-7));
  CHECK(t.plus_branch_ns == doctest::Approx(0.5 * total).epsilon(1e-7));
  const SynthesisResult r = synthesize(p);
  CHECK(r.pulse.t_i_ns == doctest::Approx(r.pulse.t_f_ns).epsilon(1e-6));
}

TEST_CASE("strong closed form over a parameter grid") {
  int points = 0;
  for (double m : {50.0, 200.0, 400.0, 600.0, 1000.0}) {
    for (double ratio : {-0.9, -0.2, 0.35, 0.7}) {
      // ratio = sqrt(2)|E| / M, signed by E.
      const double e = ratio * m * 1e-3 / std::sqrt(2.0);
      const SystemParams p = at_half_gap(e, m);
      REQUIRE(model::regime(p) == Regime::kStrong);
      const SynthesisResult r = synthesize(p);
      CHECK(std::abs(r.total_ns - optimal_time_strong(p)) <= 1e-12 * r.total_ns);
      CHECK(oracle_fidelity(r.pulse, e) >= 1.0 - 1e-6);
      ++points;
    }
  }
  CHECK(points == 20);
}

TEST_CASE("weak synthesis at the half-anisotropy bias") {
  const SystemParams p(kD, 1.435, 200.0);
  const SynthesisResult r = synthesize(p);
  CHECK(r.regime == Regime::kWeak);
  CHECK(r.pulse.n_swt == 8);
  CHECK(r.pulse.t_m_ns == doctest::Approx(0.3497).epsilon(1e-3 / 0.3497));
  CHECK(r.pulse.t_i_ns == r.pulse.t_f_ns);
  // Symmetric pole-to-pole solution of the qubit model.
  CHECK(r.pulse.t_i_ns == doctest::Approx(0.166010).epsilon(1e-5 / 0.166));
  CHECK(r.total_ns > rwa_duration(200.0) / std::sqrt(2.0));
  CHECK(r.total_ns < rwa_duration(200.0));
  CHECK(oracle_fidelity(r.pulse, p.half_gap_ghz()) >= 1.0 - 1e-9);
  CHECK(r.fidelity_2lvl >= 1.0 - 1e-9);
}

TEST_CASE("weak-regime invariants") {
  for (double e : {0.3, 0.7175, -0.5}) {
    for (double ratio : {0.1, 0.3, 0.5, 0.8}) {
      // ratio = M / (sqrt(2)|E|)
      const double m = ratio * std::sqrt(2.0) * std::abs(e) * 1e3;
      const SystemParams p = at_half_gap(e, m);
      CAPTURE(e);
      CAPTURE(m);
      REQUIRE(model::regime(p) == Regime::kWeak);
      const SynthesisResult r = synthesize_weak(p);
      const double period = 1.0 / bloch_rate_ghz(p);
      CHECK(r.pulse.t_m_ns > 0.5 * period);
      CHECK(r.pulse.t_m_ns < period);
      CHECK(r.pulse.t_i_ns > 0.0);
      CHECK(r.pulse.t_i_ns <= r.pulse.t_m_ns);
      CHECK(r.pulse.t_f_ns == r.pulse.t_i_ns);
      CHECK(oracle_fidelity(r.pulse, e) >= 1.0 - 1e-9);
      CHECK(std::abs(r.total_ns - r.pulse.total_time_ns()) <= 1e-12);
      if (ratio <= 0.3) {
        CHECK(r.total_ns <= rwa_duration(m));
        CHECK(r.total_ns > rwa_duration(m) / std::sqrt(2.0));
      }
      for (int n : {r.pulse.n_swt - 1, r.pulse.n_swt + 1}) {
        const std::optional<BangBangPulse> other = solve_weak_switches(p, n);
        if (other) CHECK(other->total_time_ns() >= r.total_ns);
      }
    }
  }
}

TEST_CASE("rotation time does not grow with the drive") {
  for (double e : {0.05, 0.3, 0.7175, -1.2}) {
    double previous = 0.0;
    bool first = true;
    for (double m : {50.0, 100.0, 150.0, 200.0, 300.0, 400.0, 600.0, 1000.0, 2000.0}) {
      const double t = synthesize(at_half_gap(e, m)).total_ns;
      if (!first) CHECK(t <= previous * (1.0 + 1e-12));
      previous = t;
      first = false;
    }
  }
}

TEST_CASE("flipping the first sign keeps time and fidelity") {
  for (double b : {1.435, 2.77, 0.3, 4.2}) {
    const SystemParams p(kD, b, 200.0);
    const SynthesisResult r = synthesize(p);
    BangBangPulse flipped = r.pulse;
    flipped.first_sign = -1;
    CHECK(flipped.total_time_ns() == r.pulse.total_time_ns());
    const double f = dynamics::transfer_fidelity(
        dynamics::evolve_pulse(flipped, p, dynamics::Levels::kTwo).final_state);
    CHECK(f == doctest::Approx(r.fidelity_2lvl).epsilon(1e-12));
    CHECK(oracle_fidelity(flipped, p.half_gap_ghz()) >= 1.0 - 1e-9);
  }
}

TEST_CASE("weak solver edge cases") {
  const SystemParams p(kD, 1.435, 200.0);
  CHECK_FALSE(solve_weak_switches(p, 0).has_value());
  CHECK_FALSE(solve_weak_switches(p, 1).has_value());
  CHECK(weak_switch_limit(p) == 21);
  WeakSolverOptions tight;
  tight.max_switchings = 4;  // below the tilt bound for this point
  try {
    synthesize_weak(p, tight);
    FAIL("expected an infeasible scan");
  } catch (const InfeasibleError& e) {
    CHECK(std::string(e.what()).find(", 4]") != std::string::npos);
  }
  CHECK_THROWS_AS(synthesize_weak(at_half_gap(0.05, 200.0)), RegimeError);
}

TEST_CASE("the crossing is singular") {
  try {
    synthesize(SystemParams(kD, kD, 200.0));
    FAIL("expected a singular-point error");
  } catch (const SingularPointError& e) {
    CHECK(std::string(e.what()).find("the point E=0 is singular") != std::string::npos);
  }
  CHECK_THROWS_AS(rwa_waveform(SystemParams(kD, kD, 200.0), 1e-3), SingularPointError);
}

TEST_CASE("rotating-wave duration") {
  CHECK(std::abs(rwa_duration(200.0) - 3.536) <= 5e-4);
  CHECK(std::abs(rwa_duration(50.0) - 14.14) <= 5e-3);
  CHECK(std::abs(rwa_duration(600.0) - 1.179) <= 5e-4);
  CHECK(rwa_duration(200.0) == doctest::Approx(std::sqrt(2.0) / 0.4).epsilon(1e-15));
}

TEST_CASE("rotating-wave waveform") {
  for (double b : {1.435, 0.2, 4.0}) {
    const pulse::SampledWaveform w = rwa_waveform(SystemParams(kD, b, 200.0), 1e-3);
    CHECK(w.duration_ns() == doctest::Approx(rwa_duration(200.0)).epsilon(1e-12));
    CHECK(w.dt_ns <= 1e-3);
    CHECK(w.samples_mhz.front() == doctest::Approx(200.0).epsilon(1e-4));
  }
  const pulse::Spectrum s = pulse::spectrum(rwa_waveform(SystemParams(kD, 1.435, 200.0), 1e-3));
  const std::vector<double> mag = s.magnitudes();
  std::size_t top = 1;
  for (std::size_t k = 1; k < mag.size(); ++k) {
    if (mag[k] > mag[top]) top = k;
  }
  CHECK(std::abs(s.frequency_ghz(top) - 1.435) <= s.bin_spacing_ghz());
}

TEST_CASE("pulse json fields") {
  const SynthesisResult r = synthesize(SystemParams(kD, 1.435, 200.0));
  const nlohmann::ordered_json j = nlohmann::ordered_json::parse(pulse_json(r));
  std::vector<std::string> keys;
  for (const auto& item : j.items()) keys.push_back(item.key());
  CHECK(keys == std::vector<std::string>{"t_i_ns", "t_m_ns", "t_f_ns", "n_swt", "first_sign", "m_mhz",
                                         "total_ns", "fidelity_2lvl", "regime"});
  CHECK(j["n_swt"] == 8);
  CHECK(j["regime"] == "weak");
  CHECK(j["t_m_ns"].get<double>() == doctest::Approx(r.pulse.t_m_ns).epsilon(1e-8));
}

}  // namespace
}  // namespace nvbang::synth
