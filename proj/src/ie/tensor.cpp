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

#include "mobilecs/ie/tensor.hpp"

#include <cmath>
#include <stdexcept>

namespace mobilecs::ie {

Param::Param(std::string n, int r, int c)
    : name(std::move(n)),
      rows(r),
      cols(c),
      value(static_cast<std::size_t>(r) * c, 0.0),
      grad(value.size(), 0.0),
      m(value.size(), 0.0),
      v(value.size(), 0.0) {}

void Param::ZeroGrad() { std::fill(grad.begin(), grad.end(), 0.0); }

void Param::InitUniform(std::mt19937_64& rng, double scale) {
  for (double& x : value) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    x = (2.0 * u - 1.0) * scale;
  }
}

Json Param::ToJson() const {
  return {{"name", name}, {"rows", rows}, {"cols", cols}, {"value", value}};
}

void Param::LoadJson(const Json& j) {
  if (j.at("name").get<std::string>() != name || j.at("rows").get<int>() != rows ||
      j.at("cols").get<int>() != cols) {
    throw std::runtime_error("checkpoint parameter mismatch for " + name);
  }
  value = j.at("value").get<std::vector<double>>();
  if (value.size() != static_cast<std::size_t>(rows) * cols) {
    throw std::runtime_error("checkpoint parameter size mismatch for " + name);
  }
  grad.assign(value.size(), 0.0);
  m.assign(value.size(), 0.0);
  v.assign(value.size(), 0.0);
}

Adam::Adam(std::vector<Param*> params, AdamConfig config)
    : params_(std::move(params)), config_(config) {}

void Adam::Step(int batch) {
  const double scale = batch > 0 ? 1.0 / batch : 1.0;
  double norm2 = 0.0;
  for (Param* p : params_) {
    for (double& g : p->grad) {
      g *= scale;
      norm2 += g * g;
    }
  }
  const double norm = std::sqrt(norm2);
  const double clip = config_.clip_norm > 0 && norm > config_.clip_norm ? config_.clip_norm / norm : 1.0;
  ++t_;
  const double c1 = 1.0 - std::pow(config_.beta1, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(config_.beta2, static_cast<double>(t_));
  for (Param* p : params_) {
    for (std::size_t i = 0; i < p->size(); ++i) {
      const double g = p->grad[i] * clip;
      p->m[i] = config_.beta1 * p->m[i] + (1 - config_.beta1) * g;
      p->v[i] = config_.beta2 * p->v[i] + (1 - config_.beta2) * g * g;
      p->value[i] -= config_.learning_rate * (p->m[i] / c1) / (std::sqrt(p->v[i] / c2) + config_.epsilon);
    }
    p->ZeroGrad();
  }
}

}  // namespace mobilecs::ie
