// Copyright 2026 The lepto authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LEPTO_NUMERIC_FFT_HPP
#define LEPTO_NUMERIC_FFT_HPP

#include <complex>
#include <vector>

namespace lepto {

// In-place iterative radix-2 FFT. Length must be a power of two. The inverse
// transform includes the 1/N factor.
void fft_radix2(std::vector<std::complex<double>>& a, bool inverse);

}  // namespace lepto

#endif  // LEPTO_NUMERIC_FFT_HPP
