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

// Physical parameters and quantum states of the NV ground-state spin.
//
// Frequencies are stored as cyclic values (GHz for D and b, MHz for the drive
// bound M); every dynamical formula multiplies by 2*pi. Times are in ns.
//
// Three-level basis order is (m_S = +1, 0, -1). The effective qubit lives on
// {m_S = 0, m_S = -1}; its two-level basis order is (|down>, |up>) with
// |down> = m_S = 0 and |up> = m_S = -1.

#include <numbers>
#include <string_view>

#include <Eigen/Dense>

namespace nvbang {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

}  // namespace nvbang

namespace nvbang::model {

inline constexpr double kDefaultAnisotropyGHz = 2.87;
inline constexpr double kGyromagneticMHzPerGauss = 2.8025;
// |E| below this fraction of M counts as the singular point E = 0.
inline constexpr double kSingularFraction = 1e-6;

enum class Regime { kStrong, kWeak, kSingular };

std::string_view to_string(Regime regime);

/// Anisotropy D, bias b and drive bound M of one NV spin.
///
/// The qubit half-gap E = (D - b)/2 and the idle gap D + b are always derived
/// from D and b; nothing else is stored.
class SystemParams {
 public:
  /// Throws InvalidParameter unless D > 0 and M > 0 (and all are finite).
  SystemParams(double anisotropy_ghz, double bias_ghz, double drive_mhz);

  double anisotropy_ghz() const { return anisotropy_ghz_; }
  double bias_ghz() const { return bias_ghz_; }
  double drive_mhz() const { return drive_mhz_; }
  double drive_ghz() const { return drive_mhz_ * 1e-3; }

  /// E. Negative above the level crossing (b > D).
  double half_gap_ghz() const { return 0.5 * (anisotropy_ghz_ - bias_ghz_); }
  /// 2E, the splitting between m_S = 0 and m_S = -1.
  double qubit_gap_ghz() const { return anisotropy_ghz_ - bias_ghz_; }
  /// Splitting between m_S = +1 and m_S = 0.
  double idle_gap_ghz() const { return anisotropy_ghz_ + bias_ghz_; }

 private:
  double anisotropy_ghz_;
  double bias_ghz_;
  double drive_mhz_;
};

SystemParams make_system(double anisotropy_ghz, double bias_ghz, double drive_mhz);

/// Zeeman frequency (GHz) of a field along the NV axis.
double gauss_to_frequency(double gauss);
double frequency_to_gauss(double ghz);

/// Strong if M >= sqrt(2)|E|, weak below, singular when |E| < 1e-6 M.
Regime regime(const SystemParams& params);
Regime regime(double half_gap_ghz, double drive_ghz);

/// Unit-norm amplitude vector of dimension 2 or 3.
class SpinState {
 public:
  static constexpr int kPlusOne = 0;
  static constexpr int kZero = 1;
  static constexpr int kMinusOne = 2;
  static constexpr int kDown = 0;
  static constexpr int kUp = 1;

  /// Throws DimensionError for other dimensions and InvalidParameter if the
  /// norm is off by more than 1e-10.
  explicit SpinState(Eigen::VectorXcd amplitudes);

  static SpinState qubit_down();
  static SpinState qubit_up();
  static SpinState ms_zero();

  int dimension() const { return static_cast<int>(amplitudes_.size()); }
  const Eigen::VectorXcd& amplitudes() const { return amplitudes_; }
  double norm_deviation() const { return std::abs(amplitudes_.squaredNorm() - 1.0); }

 private:
  Eigen::VectorXcd amplitudes_;
};

struct BlochVector {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double norm() const;
};

}  // namespace nvbang::model
