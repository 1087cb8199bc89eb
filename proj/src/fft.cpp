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

#include "fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace nvbang::fft {
namespace {

// FFTW's planner is not thread-safe; execution is.
std::mutex& planner_mutex() {
  static std::mutex mutex;
  return mutex;
}

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};

template <typename T>
using FftwBuffer = std::unique_ptr<T[], FftwFree>;

template <typename T>
FftwBuffer<T> allocate(std::size_t n) {
  auto* raw = static_cast<T*>(fftw_malloc(sizeof(T) * std::max<std::size_t>(n, 1)));
  if (raw == nullptr) throw std::bad_alloc();
  return FftwBuffer<T>(raw);
}

class Plan {
 public:
  explicit Plan(fftw_plan plan) : plan_(plan) {
    if (plan_ == nullptr) throw std::runtime_error("FFTW failed to create a plan");
  }
  Plan(const Plan&) = delete;
  Plan& operator=(const Plan&) = delete;
  ~Plan() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan_);
  }
  void execute() const { fftw_execute(plan_); }

 private:
  fftw_plan plan_;
};

}  // namespace

std::vector<std::complex<double>> forward_real(std::span<const double> input) {
  const std::size_t n = input.size();
  const std::size_t bins = n / 2 + 1;
  auto in = allocate<double>(n);
  auto out = allocate<fftw_complex>(bins);
  std::unique_ptr<Plan> plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = std::make_unique<Plan>(
        fftw_plan_dft_r2c_1d(static_cast<int>(n), in.get(), out.get(), FFTW_ESTIMATE));
  }
  std::copy(input.begin(), input.end(), in.get());
  plan->execute();

  std::vector<std::complex<double>> result(bins);
  for (std::size_t k = 0; k < bins; ++k) result[k] = {out[k][0], out[k][1]};
  return result;
}

std::vector<double> inverse_real(std::span<const std::complex<double>> half_spectrum,
                                 std::size_t n) {
  const std::size_t bins = n / 2 + 1;
  if (half_spectrum.size() != bins) {
    throw std::invalid_argument("half spectrum size does not match transform length");
  }
  auto in = allocate<fftw_complex>(bins);
  auto out = allocate<double>(n);
  std::unique_ptr<Plan> plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = std::make_unique<Plan>(
        fftw_plan_dft_c2r_1d(static_cast<int>(n), in.get(), out.get(), FFTW_ESTIMATE));
  }
  // c2r overwrites its input, so the copy happens after planning.
  for (std::size_t k = 0; k < bins; ++k) {
    in[k][0] = half_spectrum[k].real();
    in[k][1] = half_spectrum[k].imag();
  }
  plan->execute();
  return std::vector<double>(out.get(), out.get() + n);
}

}  // namespace nvbang::fft
