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

#include <random>
#include <vector>

#include "doctest.h"
#include "mobilecs/kernels/kernels.hpp"

namespace k = mobilecs::kernels;

namespace {

std::vector<double> Random(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(n);
  for (double& x : v) x = u(rng);
  return v;
}

void CheckClose(const std::vector<double>& a, const std::vector<double>& b) {
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-12));
}

void CompareTables(const k::KernelTable& ref, const k::KernelTable& alt) {
  std::mt19937_64 rng(11);
  for (std::size_t rows : {1u, 3u, 4u, 5u, 8u, 17u}) {
    for (std::size_t cols : {1u, 2u, 3u, 4u, 7u, 8u, 9u, 33u}) {
      const auto w = Random(rng, rows * cols);
      const auto x = Random(rng, cols);
      const auto y = Random(rng, rows);

      CHECK(ref.dot(x.data(), x.data(), cols) ==
            doctest::Approx(alt.dot(x.data(), x.data(), cols)).epsilon(1e-12));

      auto a1 = y, a2 = y;
      ref.axpy(0.7, y.data(), a1.data(), rows);
      alt.axpy(0.7, y.data(), a2.data(), rows);
      CheckClose(a1, a2);

      auto g1 = y, g2 = y;
      ref.gemv(w.data(), rows, cols, x.data(), g1.data());
      alt.gemv(w.data(), rows, cols, x.data(), g2.data());
      CheckClose(g1, g2);

      auto t1 = x, t2 = x;
      ref.gemv_t(w.data(), rows, cols, y.data(), t1.data());
      alt.gemv_t(w.data(), rows, cols, y.data(), t2.data());
      CheckClose(t1, t2);

      auto w1 = w, w2 = w;
      ref.ger(-0.3, y.data(), rows, x.data(), cols, w1.data());
      alt.ger(-0.3, y.data(), rows, x.data(), cols, w2.data());
      CheckClose(w1, w2);
    }
  }
}

}  // namespace

TEST_CASE("scalar kernels compute reference values") {
  const auto& s = k::ScalarTable();
  const std::vector<double> w = {1, 2, 3, 4, 5, 6};  // 2x3
  std::vector<double> y = {1, 1};
  const std::vector<double> x = {1, 0, -1};
  s.gemv(w.data(), 2, 3, x.data(), y.data());
  CHECK(y == std::vector<double>{-1, -1});
  std::vector<double> xt = {0, 0, 0};
  const std::vector<double> yy = {1, 2};
  s.gemv_t(w.data(), 2, 3, yy.data(), xt.data());
  CHECK(xt == std::vector<double>{9, 12, 15});
  CHECK(s.dot(x.data(), x.data(), 3) == 2.0);
}

TEST_CASE("avx2 kernels match scalar") {
  const k::KernelTable* avx2 = k::Avx2Table();
  if (avx2 == nullptr) {
    MESSAGE("avx2 variant unavailable on this host");
    return;
  }
  CompareTables(k::ScalarTable(), *avx2);
}

TEST_CASE("neon kernels match scalar") {
  const k::KernelTable* neon = k::NeonTable();
  if (neon == nullptr) {
    MESSAGE("neon variant unavailable on this host");
    return;
  }
  CompareTables(k::ScalarTable(), *neon);
}

TEST_CASE("active table can be forced to scalar") {
  const k::Isa before = k::Active().isa;
  CHECK(k::SetActive(k::Isa::kScalar));
  CHECK(k::Active().isa == k::Isa::kScalar);
  k::SetActive(before);
}
