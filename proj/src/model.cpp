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

#include "nvbang/model.hpp"

#include <cmath>
#include <string>

#include "nvbang/error.hpp"

namespace nvbang::model {

std::string_view to_string(Regime regime) {
  switch (regime) {
    case Regime::kStrong:
      return "strong";
    case Regime::kWeak:
      return "weak";
    case Regime::kSingular:
      return "singular";
  }
  return "unknown";
}

SystemParams::SystemParams(double anisotropy_ghz, double bias_ghz, double drive_mhz)
    : anisotropy_ghz_(anisotropy_ghz), bias_ghz_(bias_ghz), drive_mhz_(drive_mhz) {
  if (!std::isfinite(anisotropy_ghz) || !std::isfinite(bias_ghz) || !std::isfinite(drive_mhz)) {
    throw InvalidParameter("system parameters must be finite");
  }
  if (anisotropy_ghz <= 0.0) {
    throw InvalidParameter("anisotropy D must be positive, got " + std::to_string(anisotropy_ghz));
  }
  if (drive_mhz <= 0.0) {
    throw InvalidParameter("drive bound M must be positive, got " + std::to_string(drive_mhz));
  }
}

SystemParams make_system(double anisotropy_ghz, double bias_ghz, double drive_mhz) {
  return SystemParams(anisotropy_ghz, bias_ghz, drive_mhz);
}

double gauss_to_frequency(double gauss) { return gauss * kGyromagneticMHzPerGauss * 1e-3; }

double frequency_to_gauss(double ghz) { return ghz * 1e3 / kGyromagneticMHzPerGauss; }

Regime regime(double half_gap_ghz, double drive_ghz) {
  const double e = std::abs(half_gap_ghz);
  if (e < kSingularFraction * drive_ghz) return Regime::kSingular;
  // Boundary M = sqrt(2)|E| goes to the strong branch.
  if (drive_ghz >= std::numbers::sqrt2 * e) return Regime::kStrong;
  return Regime::kWeak;
}

Regime regime(const SystemParams& params) {
  return regime(params.half_gap_ghz(), params.drive_ghz());
}

SpinState::SpinState(Eigen::VectorXcd amplitudes) : amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() != 2 && amplitudes_.size() != 3) {
    throw DimensionError("spin state must have dimension 2 or 3, got " +
                         std::to_string(amplitudes_.size()));
  }
  if (norm_deviation() > 1e-10) {
    throw InvalidParameter("spin state is not normalized");
  }
}

SpinState SpinState::qubit_down() { return SpinState(Eigen::Vector2cd(1.0, 0.0)); }

SpinState SpinState::qubit_up() { return SpinState(Eigen::Vector2cd(0.0, 1.0)); }

SpinState SpinState::ms_zero() { return SpinState(Eigen::Vector3cd(0.0, 1.0, 0.0)); }

double BlochVector::norm() const { return std::sqrt(x * x + y * y + z * z); }

}  // namespace nvbang::model
