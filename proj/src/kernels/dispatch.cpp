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

#include <cstdlib>
#include <string_view>

#include "kernels_internal.hpp"

namespace sophgrade::kernels {
namespace {

bool cpu_has_avx2() {
#if defined(SOPHGRADE_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelSet& resolve() {
  const KernelSet* avx2 = avx2_kernels();
  if (const char* env = std::getenv("SOPHGRADE_KERNELS")) {
    if (std::string_view(env) == "scalar") return scalar_kernels();
  }
  return avx2 != nullptr ? *avx2 : scalar_kernels();
}

}  // namespace

const KernelSet* avx2_kernels() {
#if defined(SOPHGRADE_HAVE_AVX2)
  static const bool supported = cpu_has_avx2();
  return supported ? detail::avx2_table() : nullptr;
#else
  (void)cpu_has_avx2;
  return nullptr;
#endif
}

const KernelSet& active() {
  static const KernelSet& set = resolve();
  return set;
}

}  // namespace sophgrade::kernels
