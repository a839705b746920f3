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

#include "kernels_internal.hpp"

namespace sophgrade::kernels {
namespace {

double sum_scalar(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i];
  return acc;
}

double dot_scalar(const double* x, const double* y, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

double ssd_scalar(const double* x, std::size_t n, double center) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = x[i] - center;
    acc += d * d;
  }
  return acc;
}

double scd_scalar(const double* x, const double* y, std::size_t n, double cx,
                  double cy) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += (x[i] - cx) * (y[i] - cy);
  return acc;
}

void affine_scalar(const double* x, std::size_t n, double shift, double scale,
                   double* out) {
  for (std::size_t i = 0; i < n; ++i) out[i] = (x[i] - shift) * scale;
}

}  // namespace

const KernelSet& scalar_kernels() {
  static const KernelSet set{"scalar",   sum_scalar, dot_scalar, ssd_scalar,
                             scd_scalar, affine_scalar};
  return set;
}

}  // namespace sophgrade::kernels
