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

// Thin RAII layer over FFTW's real-data transforms.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace nvbang::fft {

/// Unnormalized forward transform of real input; returns n/2 + 1 bins.
std::vector<std::complex<double>> forward_real(std::span<const double> input);

/// Unnormalized inverse of a half spectrum to n real samples (divide by n to invert forward_real).
std::vector<double> inverse_real(std::span<const std::complex<double>> half_spectrum, std::size_t n);

}  // namespace nvbang::fft
