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

// Minimal dense storage, trainable parameters and the Adam optimizer.

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "mobilecs/util/json_io.hpp"

namespace mobilecs::ie {

// Row-major matrix.
struct Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(int r, int c, double fill = 0.0)
      : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, fill) {}

  double& at(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
  double at(int r, int c) const { return data[static_cast<std::size_t>(r) * cols + c]; }
  double* row(int r) { return data.data() + static_cast<std::size_t>(r) * cols; }
  const double* row(int r) const { return data.data() + static_cast<std::size_t>(r) * cols; }
};

struct Param {
  std::string name;
  int rows = 0;
  int cols = 0;
  std::vector<double> value;
  std::vector<double> grad;
  std::vector<double> m;  // Adam first moment
  std::vector<double> v;  // Adam second moment

  Param() = default;
  Param(std::string n, int r, int c);

  std::size_t size() const { return value.size(); }
  void ZeroGrad();
  // Uniform in [-scale, scale].
  void InitUniform(std::mt19937_64& rng, double scale);

  Json ToJson() const;
  // Checks name and shape, then loads values.
  void LoadJson(const Json& j);
};

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  // Global gradient-norm clip; <= 0 disables.
  double clip_norm = 5.0;
};

class Adam {
 public:
  Adam(std::vector<Param*> params, AdamConfig config);
  // Scales gradients by 1/batch, clips, updates and zeroes them.
  void Step(int batch);

 private:
  std::vector<Param*> params_;
  AdamConfig config_;
  long t_ = 0;
};

inline double Sigmoid(double x) {
  return x >= 0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
}

// log(1 + exp(x)) without overflow.
inline double Softplus(double x) { return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

}  // namespace mobilecs::ie
