// Copyright 2026 The replaycm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "core/fft.hpp"

#include <algorithm>
#include <cstring>
#include <mutex>

#include <fftw3.h>

#include "core/error.hpp"

namespace replaycm {

namespace {
// The FFTW planner is not re-entrant.
std::mutex& PlannerMutex() {
  static std::mutex mu;
  return mu;
}
}  // namespace

bool IsPowerOfTwo(long long n) { return n > 0 && (n & (n - 1)) == 0; }

int NextPowerOfTwo(long long n) {
  int p = 1;
  while (p < n) p <<= 1;
  return p;
}

RealFft::RealFft(int n) : n_(n) {
  if (!IsPowerOfTwo(n))
    Fail(ErrorCode::kInvalidArgument, "FFT size must be a power of two");
  std::lock_guard<std::mutex> lock(PlannerMutex());
  real_ = fftw_alloc_real(n);
  auto* c = fftw_alloc_complex(n / 2 + 1);
  cplx_ = c;
  forward_plan_ = fftw_plan_dft_r2c_1d(n, real_, c, FFTW_ESTIMATE);
  inverse_plan_ = fftw_plan_dft_c2r_1d(n, c, real_, FFTW_ESTIMATE);
}

RealFft::~RealFft() {
  std::lock_guard<std::mutex> lock(PlannerMutex());
  fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
  fftw_destroy_plan(static_cast<fftw_plan>(inverse_plan_));
  fftw_free(real_);
  fftw_free(cplx_);
}

void RealFft::Forward(std::span<const double> in,
                      std::span<std::complex<double>> out) {
  const size_t n = static_cast<size_t>(n_);
  if (in.size() > n || out.size() != static_cast<size_t>(num_bins()))
    Fail(ErrorCode::kInvalidArgument, "FFT buffer size mismatch");
  std::copy(in.begin(), in.end(), real_);
  std::fill(real_ + in.size(), real_ + n, 0.0);
  fftw_execute(static_cast<fftw_plan>(forward_plan_));
  std::memcpy(out.data(), cplx_, out.size() * sizeof(std::complex<double>));
}

void RealFft::Inverse(std::span<const std::complex<double>> in,
                      std::span<double> out) {
  if (in.size() != static_cast<size_t>(num_bins()) ||
      out.size() != static_cast<size_t>(n_))
    Fail(ErrorCode::kInvalidArgument, "FFT buffer size mismatch");
  // c2r destroys its input, so always work on the internal copy.
  std::memcpy(cplx_, in.data(), in.size() * sizeof(std::complex<double>));
  fftw_execute(static_cast<fftw_plan>(inverse_plan_));
  std::copy(real_, real_ + n_, out.begin());
}

}  // namespace replaycm
