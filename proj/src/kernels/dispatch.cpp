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

#include <atomic>
#include <cassert>
#include <cstdlib>
#include <string>

#include "mobilecs/kernels/kernels.hpp"
#include "variants.hpp"

namespace mobilecs::kernels {
namespace {

bool CpuHasAvx2() {
#if defined(MOBILECS_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable* Detect() {
  if (const char* env = std::getenv("MOBILECS_ISA")) {
    const std::string want(env);
    if (want == "scalar") return &ScalarTable();
    if (want == "avx2" && Avx2Table() != nullptr) return Avx2Table();
    if (want == "neon" && NeonTable() != nullptr) return NeonTable();
  }
  if (const KernelTable* t = Avx2Table()) return t;
  if (const KernelTable* t = NeonTable()) return t;
  return &ScalarTable();
}

std::atomic<const KernelTable*>& Slot() {
  static std::atomic<const KernelTable*> slot{Detect()};
  return slot;
}

}  // namespace

std::string_view IsaName(Isa isa) {
  switch (isa) {
    case Isa::kScalar: return "scalar";
    case Isa::kAvx2: return "avx2";
    case Isa::kNeon: return "neon";
  }
  return "unknown";
}

const KernelTable* Avx2Table() {
#if defined(MOBILECS_HAVE_AVX2)
  static const bool ok = CpuHasAvx2();
  return ok ? &internal::Avx2Variant() : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable* NeonTable() {
#if defined(MOBILECS_HAVE_NEON)
  return &internal::NeonVariant();
#else
  return nullptr;
#endif
}

const KernelTable& Active() { return *Slot().load(std::memory_order_relaxed); }

bool SetActive(Isa isa) {
  const KernelTable* table = nullptr;
  switch (isa) {
    case Isa::kScalar: table = &ScalarTable(); break;
    case Isa::kAvx2: table = Avx2Table(); break;
    case Isa::kNeon: table = NeonTable(); break;
  }
  if (table == nullptr) return false;
  Slot().store(table, std::memory_order_relaxed);
  return true;
}

double Dot(std::span<const double> x, std::span<const double> y) {
  assert(x.size() == y.size());
  return Active().dot(x.data(), y.data(), x.size());
}

void Axpy(double alpha, std::span<const double> x, std::span<double> y) {
  assert(x.size() == y.size());
  Active().axpy(alpha, x.data(), y.data(), x.size());
}

void Gemv(std::span<const double> w, std::size_t rows, std::size_t cols,
          std::span<const double> x, std::span<double> y) {
  assert(w.size() == rows * cols && x.size() == cols && y.size() == rows);
  Active().gemv(w.data(), rows, cols, x.data(), y.data());
}

void GemvT(std::span<const double> w, std::size_t rows, std::size_t cols,
           std::span<const double> y, std::span<double> x) {
  assert(w.size() == rows * cols && x.size() == cols && y.size() == rows);
  Active().gemv_t(w.data(), rows, cols, y.data(), x.data());
}

void Ger(double alpha, std::span<const double> y, std::span<const double> x,
         std::span<double> w) {
  assert(w.size() == y.size() * x.size());
  Active().ger(alpha, y.data(), y.size(), x.data(), x.size(), w.data());
}

}  // namespace mobilecs::kernels
