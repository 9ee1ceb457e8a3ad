// Copyright 2026 The MobileCS Toolkit Authors.
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

// aarch64 only; Advanced SIMD is part of the base ISA there.

#include <arm_neon.h>

#include "variants.hpp"

namespace mobilecs::kernels::internal {
namespace {

double DotNeon(const double* x, const double* y, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(x + i), vld1q_f64(y + i));
    acc1 = vfmaq_f64(acc1, vld1q_f64(x + i + 2), vld1q_f64(y + i + 2));
  }
  double sum = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) sum += x[i] * y[i];
  return sum;
}

void AxpyNeon(double alpha, const double* x, double* y, std::size_t n) {
  const float64x2_t a = vdupq_n_f64(alpha);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), a, vld1q_f64(x + i)));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void GemvNeon(const double* w, std::size_t rows, std::size_t cols,
              const double* x, double* y) {
  for (std::size_t r = 0; r < rows; ++r) y[r] += DotNeon(w + r * cols, x, cols);
}

void GemvTNeon(const double* w, std::size_t rows, std::size_t cols,
               const double* y, double* x) {
  for (std::size_t r = 0; r < rows; ++r) AxpyNeon(y[r], w + r * cols, x, cols);
}

void GerNeon(double alpha, const double* y, std::size_t rows, const double* x,
             std::size_t cols, double* w) {
  for (std::size_t r = 0; r < rows; ++r) {
    AxpyNeon(alpha * y[r], x, w + r * cols, cols);
  }
}

}  // namespace

const KernelTable& NeonVariant() {
  static const KernelTable table{Isa::kNeon, DotNeon,   AxpyNeon,
                                 GemvNeon,   GemvTNeon, GerNeon};
  return table;
}

}  // namespace mobilecs::kernels::internal
