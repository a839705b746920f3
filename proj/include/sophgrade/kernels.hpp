// Copyright 2026 The sophgrade Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SOPHGRADE_KERNELS_HPP_
#define SOPHGRADE_KERNELS_HPP_

// Reduction kernels behind the statistics code. Every kernel has a portable
// scalar reference; an AVX2 variant is compiled on x86-64 and picked at
// runtime when the CPU reports AVX2 and FMA. SOPHGRADE_KERNELS=scalar|avx2
// overrides the choice (an unavailable request falls back to scalar).

#include <cstddef>
#include <span>
#include <string_view>

namespace sophgrade::kernels {

struct KernelSet {
  std::string_view name;
  double (*sum)(const double* x, std::size_t n);
  double (*dot)(const double* x, const double* y, std::size_t n);
  // sum_i (x_i - center)^2
  double (*sum_squared_deviations)(const double* x, std::size_t n,
                                   double center);
  // sum_i (x_i - cx) * (y_i - cy)
  double (*sum_cross_deviations)(const double* x, const double* y,
                                 std::size_t n, double cx, double cy);
  // out_i = (x_i - shift) * scale
  void (*affine)(const double* x, std::size_t n, double shift, double scale,
                 double* out);
};

const KernelSet& scalar_kernels();

// nullptr when the variant was not compiled in or the CPU lacks support.
const KernelSet* avx2_kernels();

// The set selected for this process (resolved once).
const KernelSet& active();

inline double sum(std::span<const double> x) {
  return active().sum(x.data(), x.size());
}

inline double dot(std::span<const double> x, std::span<const double> y) {
  return active().dot(x.data(), y.data(), x.size());
}

inline double sum_squared_deviations(std::span<const double> x,
                                     double center) {
  return active().sum_squared_deviations(x.data(), x.size(), center);
}

inline double sum_cross_deviations(std::span<const double> x,
                                   std::span<const double> y, double cx,
                                   double cy) {
  return active().sum_cross_deviations(x.data(), y.data(), x.size(), cx, cy);
}

inline void affine(std::span<const double> x, double shift, double scale,
                   std::span<double> out) {
  active().affine(x.data(), x.size(), shift, scale, out.data());
}

}  // namespace sophgrade::kernels

#endif  // SOPHGRADE_KERNELS_HPP_
