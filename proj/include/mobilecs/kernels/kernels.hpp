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

#pragma once

// Dense double-precision kernels used by the neural encoders and heads.
//
// Every kernel has a scalar reference implementation. Vectorized variants
// (AVX2+FMA on x86-64, NEON on aarch64) are compiled into separate
// translation units and selected once at startup from the CPU feature bits.
// The active table can be overridden for testing or with MOBILECS_ISA.

#include <cstddef>
#include <span>
#include <string_view>

namespace mobilecs::kernels {

enum class Isa { kScalar, kAvx2, kNeon };

std::string_view IsaName(Isa isa);

// All matrices are row-major with `cols` as the leading dimension.
struct KernelTable {
  Isa isa;
  // sum_i x[i] * y[i]
  double (*dot)(const double* x, const double* y, std::size_t n);
  // y[i] += alpha * x[i]
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // y += W x, W is rows x cols
  void (*gemv)(const double* w, std::size_t rows, std::size_t cols,
               const double* x, double* y);
  // x += W^T y, W is rows x cols
  void (*gemv_t)(const double* w, std::size_t rows, std::size_t cols,
                 const double* y, double* x);
  // W += alpha * y x^T, W is rows x cols
  void (*ger)(double alpha, const double* y, std::size_t rows, const double* x,
              std::size_t cols, double* w);
};

const KernelTable& ScalarTable();

// Returns nullptr when the variant was not compiled in or the CPU lacks it.
const KernelTable* Avx2Table();
const KernelTable* NeonTable();

// The table used by the span wrappers below.
const KernelTable& Active();

// Forces a specific variant; returns false if it is unavailable.
bool SetActive(Isa isa);

// Span wrappers over the active table. Sizes are checked with assertions
// only; callers own the shape contract.
double Dot(std::span<const double> x, std::span<const double> y);
void Axpy(double alpha, std::span<const double> x, std::span<double> y);
void Gemv(std::span<const double> w, std::size_t rows, std::size_t cols,
          std::span<const double> x, std::span<double> y);
void GemvT(std::span<const double> w, std::size_t rows, std::size_t cols,
           std::span<const double> y, std::span<double> x);
void Ger(double alpha, std::span<const double> y, std::span<const double> x,
         std::span<double> w);

}  // namespace mobilecs::kernels
