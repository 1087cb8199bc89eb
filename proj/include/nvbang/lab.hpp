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

// Parameter studies: rotation time and leakage versus bias, resonance
// positions, and leakage versus spectral cutoff.

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "nvbang/model.hpp"

namespace nvbang::lab {

struct BiasSweepRow {
  double b_ghz = 0.0;
  double b_gauss = 0.0;
  model::Regime regime = model::Regime::kSingular;
  double t_ns = 0.0;
  double t_over_trwa = 0.0;
  double p_minus1 = 0.0;
  double p_plus1 = 0.0;
  double p_zero = 0.0;
  int n_swt = 0;
  bool ok = true;
  std::string error;
};

struct CutoffScanRow {
  double nu_c_ghz = 0.0;
  double p_minus1 = 0.0;
  double p_plus1 = 0.0;
  double p_zero = 0.0;
};

struct SweepOptions {
  /// Worker count; 0 uses the machine's parallelism.
  unsigned threads = 0;
};

struct ScanOptions {
  double dt_ns = 1e-3;
  unsigned threads = 0;
};

enum class Branch { kBelowCrossing, kAboveCrossing };

struct ResonantBias {
  int n = 0;
  Branch branch = Branch::kBelowCrossing;
  double b_ghz = 0.0;
};

/// from, from + step, ... up to `to` inclusive (within 1e-9 of a step).
std::vector<double> linear_grid(double from, double to, double step);

/// linear_grid over b without the points inside the singular window around b = D.
std::vector<double> bias_grid(double from_ghz, double to_ghz, double step_ghz, double d_ghz,
                              double m_mhz);

/// Synthesizes and evolves on three levels at each bias. Rows come back in grid
/// order; a point whose synthesis fails is flagged (ok = false) and the sweep goes on.
/// Throws InvalidParameter for non-finite points or points inside the singular window.
std::vector<BiasSweepRow> sweep_bias(double d_ghz, double m_mhz, std::span<const double> b_grid,
                                     const SweepOptions& options = {});

/// Biases where the idle gap equals (2n + 1) times the qubit gap, for n = 1 .. n_max,
/// below (nD/(n+1)) and above ((n+1)D/n) the crossing. include_zero adds b = 0 for n = 0.
std::vector<ResonantBias> resonant_biases(double d_ghz, int n_max, bool include_zero = false);

/// Synthesizes once, then for each cutoff filters the sampled pulse and evolves
/// it on three levels. A non-positive or infinite cutoff bypasses the filter.
std::vector<CutoffScanRow> cutoff_scan(double d_ghz, double b_ghz, double m_mhz,
                                       std::span<const double> nu_c_grid,
                                       const ScanOptions& options = {});

/// Interior local minima of P-1 whose prominence is at least `depth`. Needs at
/// least five rows sorted by b; failed rows are skipped.
std::vector<double> dip_locator(std::span<const BiasSweepRow> sweep, double depth = 0.01);

/// Header `b_ghz,b_gauss,regime,t_ns,t_over_trwa,p_minus1,p_plus1,n_swt`.
void write_sweep_csv(std::ostream& out, std::span<const BiasSweepRow> rows);
/// Header `nu_c_ghz,p_minus1,p_plus1`.
void write_scan_csv(std::ostream& out, std::span<const CutoffScanRow> rows);

}  // namespace nvbang::lab
