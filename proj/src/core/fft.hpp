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


#ifndef REPLAYCM_CORE_FFT_HPP_
#define REPLAYCM_CORE_FFT_HPP_

#include <complex>
#include <span>

namespace replaycm {

// Real-to-complex transform of a fixed power-of-two size backed by FFTW.
// Forward is unnormalized; Inverse returns n * x for the input spectrum of x.
// Instances are not shareable across threads; create one per thread.
class RealFft {
 public:
  explicit RealFft(int n);
  ~RealFft();
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  int size() const { return n_; }
  int num_bins() const { return n_ / 2 + 1; }

  // `in` may be shorter than size(); the tail is zero-padded.
  void Forward(std::span<const double> in,
               std::span<std::complex<double>> out);
  void Inverse(std::span<const std::complex<double>> in,
               std::span<double> out);

 private:
  int n_;
  double* real_;
  void* cplx_;
  void* forward_plan_;
  void* inverse_plan_;
};

bool IsPowerOfTwo(long long n);
int NextPowerOfTwo(long long n);

}  // namespace replaycm

#endif  // REPLAYCM_CORE_FFT_HPP_
