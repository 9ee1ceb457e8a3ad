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

#include "mobilecs/kernels/kernels.hpp"

namespace mobilecs::kernels {
namespace {

double DotScalar(const double* x, const double* y, std::size_t n) {
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum += x[i] * y[i];
  return sum;
}

void AxpyScalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void GemvScalar(const double* w, std::size_t rows, std::size_t cols,
                const double* x, double* y) {
  for (std::size_t r = 0; r < rows; ++r) {
    y[r] += DotScalar(w + r * cols, x, cols);
  }
}

void GemvTScalar(const double* w, std::size_t rows, std::size_t cols,
                 const double* y, double* x) {
  for (std::size_t r = 0; r < rows; ++r) {
    AxpyScalar(y[r], w + r * cols, x, cols);
  }
}

void GerScalar(double alpha, const double* y, std::size_t rows,
               const double* x, std::size_t cols, double* w) {
  for (std::size_t r = 0; r < rows; ++r) {
    AxpyScalar(alpha * y[r], x, w + r * cols, cols);
  }
}

}  // namespace

const KernelTable& ScalarTable() {
  static const KernelTable table{Isa::kScalar, DotScalar,  AxpyScalar,
                                 GemvScalar,   GemvTScalar, GerScalar};
  return table;
}

}  // namespace mobilecs::kernels
