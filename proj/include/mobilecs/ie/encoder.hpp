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

// Character encoders: text (Unicode scalars) -> one d-dimensional vector per
// character. The trainable reference is an embedding table followed by a
// bidirectional LSTM; ExternalEncoder proxies to an embedding service.

#include <map>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "mobilecs/ie/tensor.hpp"

namespace mobilecs::ie {

class Vocabulary {
 public:
  static constexpr int kUnknown = 0;

  Vocabulary() = default;
  void Add(char32_t c);
  void AddText(const std::u32string& text);
  int Id(char32_t c) const;
  int size() const { return static_cast<int>(chars_.size()) + 1; }

  Json ToJson() const;
  static Vocabulary FromJson(const Json& j);

 private:
  std::vector<char32_t> chars_;
  std::map<char32_t, int> ids_;
};

// Opaque per-call state needed for backpropagation.
struct EncoderCache {
  virtual ~EncoderCache() = default;
};

class Encoder {
 public:
  virtual ~Encoder() = default;
  virtual int dim() const = 0;
  // Returns text.size() x dim(). When `cache` is non-null it receives what
  // Backward needs.
  virtual Matrix Encode(const std::u32string& text, std::unique_ptr<EncoderCache>* cache) const = 0;
  // Accumulates parameter gradients for d(loss)/d(output). Frozen encoders
  // ignore it.
  virtual void Backward(const EncoderCache& cache, const Matrix& d_output) {
    (void)cache;
    (void)d_output;
  }
  virtual std::vector<Param*> Params() { return {}; }
  virtual Json ToJson() const = 0;

  // Dispatches on the "kind" field.
  static std::unique_ptr<Encoder> FromJson(const Json& j);
};

// Unidirectional LSTM layer (gate order i, f, g, o).
class Lstm {
 public:
  Lstm() = default;
  Lstm(std::string name, int input, int hidden);

  struct Cache {
    std::vector<std::vector<double>> xh;     // [x_t; h_{t-1}]
    std::vector<std::vector<double>> gates;  // activated i, f, g, o
    std::vector<std::vector<double>> c;      // cell after step t
  };

  // Processes rows of `x` in order (reverse=true walks from the end); output
  // row t is the hidden state after consuming input row t.
  Matrix Forward(const Matrix& x, bool reverse, Cache* cache) const;
  // Returns d(loss)/d(x) and accumulates weight gradients.
  Matrix Backward(const Cache& cache, const Matrix& d_h, bool reverse);

  void Init(std::mt19937_64& rng);
  std::vector<Param*> Params() { return {&w_, &b_}; }
  Json ToJson() const { return {w_.ToJson(), b_.ToJson()}; }
  void LoadJson(const Json& j);
  int hidden() const { return hidden_; }

 private:
  int input_ = 0;
  int hidden_ = 0;
  Param w_;  // 4h x (input + h)
  Param b_;  // 4h x 1
};

class CharBiLstmEncoder : public Encoder {
 public:
  CharBiLstmEncoder(Vocabulary vocab, int embed_dim, int hidden, std::uint64_t seed);

  int dim() const override { return 2 * hidden_; }
  Matrix Encode(const std::u32string& text, std::unique_ptr<EncoderCache>* cache) const override;
  void Backward(const EncoderCache& cache, const Matrix& d_output) override;
  std::vector<Param*> Params() override;
  Json ToJson() const override;
  static std::unique_ptr<CharBiLstmEncoder> FromJson(const Json& j);

  const Vocabulary& vocab() const { return vocab_; }

 private:
  Vocabulary vocab_;
  int embed_dim_;
  int hidden_;
  Param embedding_;
  Lstm forward_;
  Lstm backward_;
};

// POSTs {"texts": [...]} to `url` and expects {"vectors": [[[...]]]}, one
// T x d array per text. Frozen: heads train on top of its output.
class ExternalEncoder : public Encoder {
 public:
  ExternalEncoder(std::string url, int dim);

  int dim() const override { return dim_; }
  Matrix Encode(const std::u32string& text, std::unique_ptr<EncoderCache>* cache) const override;
  std::vector<Matrix> EncodeBatch(const std::vector<std::u32string>& texts) const;
  Json ToJson() const override { return {{"kind", "external"}, {"url", url_}, {"dim", dim_}}; }

 private:
  std::string url_;
  int dim_;
};

}  // namespace mobilecs::ie
