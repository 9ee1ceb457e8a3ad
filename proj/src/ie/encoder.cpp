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

#include "mobilecs/ie/encoder.hpp"

#include <cmath>
#include <stdexcept>

#include "httplib.h"
#include "mobilecs/kernels/kernels.hpp"
#include "mobilecs/util/utf8.hpp"

namespace mobilecs::ie {

namespace k = mobilecs::kernels;

// ---- vocabulary ------------------------------------------------------------

void Vocabulary::Add(char32_t c) {
  if (ids_.count(c)) return;
  ids_[c] = static_cast<int>(chars_.size()) + 1;
  chars_.push_back(c);
}

void Vocabulary::AddText(const std::u32string& text) {
  for (char32_t c : text) Add(c);
}

int Vocabulary::Id(char32_t c) const {
  auto it = ids_.find(c);
  return it == ids_.end() ? kUnknown : it->second;
}

Json Vocabulary::ToJson() const {
  std::vector<std::uint32_t> cps(chars_.begin(), chars_.end());
  return cps;
}

Vocabulary Vocabulary::FromJson(const Json& j) {
  Vocabulary v;
  for (std::uint32_t c : j.get<std::vector<std::uint32_t>>()) v.Add(static_cast<char32_t>(c));
  return v;
}

// ---- LSTM ------------------------------------------------------------------

Lstm::Lstm(std::string name, int input, int hidden)
    : input_(input),
      hidden_(hidden),
      w_(name + ".w", 4 * hidden, input + hidden),
      b_(name + ".b", 4 * hidden, 1) {}

void Lstm::Init(std::mt19937_64& rng) {
  w_.InitUniform(rng, 1.0 / std::sqrt(static_cast<double>(hidden_)));
  std::fill(b_.value.begin(), b_.value.end(), 0.0);
  for (int j = hidden_; j < 2 * hidden_; ++j) b_.value[j] = 1.0;  // forget gate
}

void Lstm::LoadJson(const Json& j) {
  w_.LoadJson(j.at(0));
  b_.LoadJson(j.at(1));
}

Matrix Lstm::Forward(const Matrix& x, bool reverse, Cache* cache) const {
  const int T = x.rows, H = hidden_, D = input_ + hidden_;
  Matrix out(T, H);
  std::vector<double> h(H, 0.0), c(H, 0.0), xh(D), z(4 * H);
  if (cache != nullptr) {
    cache->xh.assign(T, {});
    cache->gates.assign(T, {});
    cache->c.assign(T, {});
  }
  for (int s = 0; s < T; ++s) {
    const int t = reverse ? T - 1 - s : s;
    std::copy(x.row(t), x.row(t) + input_, xh.begin());
    std::copy(h.begin(), h.end(), xh.begin() + input_);
    std::copy(b_.value.begin(), b_.value.end(), z.begin());
    k::Gemv(w_.value, 4 * H, D, xh, z);
    for (int j = 0; j < H; ++j) {
      z[j] = Sigmoid(z[j]);
      z[H + j] = Sigmoid(z[H + j]);
      z[2 * H + j] = std::tanh(z[2 * H + j]);
      z[3 * H + j] = Sigmoid(z[3 * H + j]);
      c[j] = z[H + j] * c[j] + z[j] * z[2 * H + j];
      h[j] = z[3 * H + j] * std::tanh(c[j]);
    }
    std::copy(h.begin(), h.end(), out.row(t));
    if (cache != nullptr) {
      cache->xh[t] = xh;
      cache->gates[t] = z;
      cache->c[t] = c;
    }
  }
  return out;
}

Matrix Lstm::Backward(const Cache& cache, const Matrix& d_h, bool reverse) {
  const int T = d_h.rows, H = hidden_, D = input_ + hidden_;
  Matrix d_x(T, input_);
  std::vector<double> dh_next(H, 0.0), dc_next(H, 0.0), dz(4 * H), dxh(D);
  for (int s = T - 1; s >= 0; --s) {
    const int t = reverse ? T - 1 - s : s;
    const int prev = reverse ? t + 1 : t - 1;  // step processed just before t
    const bool has_prev = s > 0;
    const auto& g = cache.gates[t];
    const auto& c = cache.c[t];
    for (int j = 0; j < H; ++j) {
      const double dh = d_h.at(t, j) + dh_next[j];
      const double tc = std::tanh(c[j]);
      const double i = g[j], f = g[H + j], gg = g[2 * H + j], o = g[3 * H + j];
      const double dc = dh * o * (1 - tc * tc) + dc_next[j];
      const double c_prev = has_prev ? cache.c[prev][j] : 0.0;
      dz[j] = dc * gg * i * (1 - i);
      dz[H + j] = dc * c_prev * f * (1 - f);
      dz[2 * H + j] = dc * i * (1 - gg * gg);
      dz[3 * H + j] = dh * tc * o * (1 - o);
      dc_next[j] = dc * f;
    }
    k::Ger(1.0, dz, cache.xh[t], w_.grad);
    k::Axpy(1.0, dz, b_.grad);
    std::fill(dxh.begin(), dxh.end(), 0.0);
    k::GemvT(w_.value, 4 * H, D, dz, dxh);
    std::copy(dxh.begin(), dxh.begin() + input_, d_x.row(t));
    std::copy(dxh.begin() + input_, dxh.end(), dh_next.begin());
  }
  return d_x;
}

// ---- BiLSTM encoder ----------------------------------------------------------

namespace {

struct BiLstmCache : EncoderCache {
  std::vector<int> ids;
  Lstm::Cache fwd;
  Lstm::Cache bwd;
};

}  // namespace

CharBiLstmEncoder::CharBiLstmEncoder(Vocabulary vocab, int embed_dim, int hidden, std::uint64_t seed)
    : vocab_(std::move(vocab)),
      embed_dim_(embed_dim),
      hidden_(hidden),
      embedding_("embedding", vocab_.size(), embed_dim),
      forward_("lstm_fwd", embed_dim, hidden),
      backward_("lstm_bwd", embed_dim, hidden) {
  std::mt19937_64 rng(seed);
  embedding_.InitUniform(rng, 0.5);
  forward_.Init(rng);
  backward_.Init(rng);
}

Matrix CharBiLstmEncoder::Encode(const std::u32string& text, std::unique_ptr<EncoderCache>* cache) const {
  const int T = static_cast<int>(text.size());
  auto state = std::make_unique<BiLstmCache>();
  Matrix x(T, embed_dim_);
  state->ids.resize(T);
  for (int t = 0; t < T; ++t) {
    state->ids[t] = vocab_.Id(text[t]);
    std::copy_n(embedding_.value.begin() + static_cast<std::ptrdiff_t>(state->ids[t]) * embed_dim_,
                embed_dim_, x.row(t));
  }
  const bool keep = cache != nullptr;
  const Matrix hf = forward_.Forward(x, false, keep ? &state->fwd : nullptr);
  const Matrix hb = backward_.Forward(x, true, keep ? &state->bwd : nullptr);
  Matrix out(T, 2 * hidden_);
  for (int t = 0; t < T; ++t) {
    std::copy_n(hf.row(t), hidden_, out.row(t));
    std::copy_n(hb.row(t), hidden_, out.row(t) + hidden_);
  }
  if (keep) *cache = std::move(state);
  return out;
}

void CharBiLstmEncoder::Backward(const EncoderCache& cache, const Matrix& d_output) {
  const auto& state = dynamic_cast<const BiLstmCache&>(cache);
  const int T = d_output.rows;
  Matrix df(T, hidden_), db(T, hidden_);
  for (int t = 0; t < T; ++t) {
    std::copy_n(d_output.row(t), hidden_, df.row(t));
    std::copy_n(d_output.row(t) + hidden_, hidden_, db.row(t));
  }
  const Matrix dx_f = forward_.Backward(state.fwd, df, false);
  const Matrix dx_b = backward_.Backward(state.bwd, db, true);
  for (int t = 0; t < T; ++t) {
    double* g = embedding_.grad.data() + static_cast<std::ptrdiff_t>(state.ids[t]) * embed_dim_;
    for (int j = 0; j < embed_dim_; ++j) g[j] += dx_f.at(t, j) + dx_b.at(t, j);
  }
}

std::vector<Param*> CharBiLstmEncoder::Params() {
  std::vector<Param*> out = {&embedding_};
  for (Param* p : forward_.Params()) out.push_back(p);
  for (Param* p : backward_.Params()) out.push_back(p);
  return out;
}

Json CharBiLstmEncoder::ToJson() const {
  return {{"kind", "char_bilstm"},
          {"embed_dim", embed_dim_},
          {"hidden", hidden_},
          {"vocab", vocab_.ToJson()},
          {"embedding", embedding_.ToJson()},
          {"forward", forward_.ToJson()},
          {"backward", backward_.ToJson()}};
}

std::unique_ptr<CharBiLstmEncoder> CharBiLstmEncoder::FromJson(const Json& j) {
  auto e = std::make_unique<CharBiLstmEncoder>(Vocabulary::FromJson(j.at("vocab")),
                                               j.at("embed_dim").get<int>(), j.at("hidden").get<int>(), 0);
  e->embedding_.LoadJson(j.at("embedding"));
  e->forward_.LoadJson(j.at("forward"));
  e->backward_.LoadJson(j.at("backward"));
  return e;
}

std::unique_ptr<Encoder> Encoder::FromJson(const Json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "char_bilstm") return CharBiLstmEncoder::FromJson(j);
  if (kind == "external") {
    return std::make_unique<ExternalEncoder>(j.at("url").get<std::string>(), j.at("dim").get<int>());
  }
  throw std::runtime_error("unknown encoder kind '" + kind + "'");
}

// ---- external encoder ------------------------------------------------------

namespace {

// Splits "http://host:port/path" into base and path.
std::pair<std::string, std::string> SplitUrl(const std::string& url) {
  const auto scheme = url.find("://");
  if (scheme == std::string::npos) throw std::invalid_argument("url without scheme: " + url);
  const auto slash = url.find('/', scheme + 3);
  if (slash == std::string::npos) return {url, "/"};
  return {url.substr(0, slash), url.substr(slash)};
}

}  // namespace

ExternalEncoder::ExternalEncoder(std::string url, int dim) : url_(std::move(url)), dim_(dim) {
  if (dim_ <= 0) throw std::invalid_argument("external encoder dimension must be positive");
}

std::vector<Matrix> ExternalEncoder::EncodeBatch(const std::vector<std::u32string>& texts) const {
  Json request = {{"texts", Json::array()}};
  for (const auto& t : texts) request["texts"].push_back(utf8::Encode(t));
  const auto [base, path] = SplitUrl(url_);
  httplib::Client client(base);
  client.set_read_timeout(120, 0);
  const auto res = client.Post(path, request.dump(), "application/json");
  if (!res) throw std::runtime_error("external encoder unreachable at " + url_);
  if (res->status != 200) {
    throw std::runtime_error("external encoder returned HTTP " + std::to_string(res->status));
  }
  const Json reply = Json::parse(res->body);
  const Json& vectors = reply.at("vectors");
  if (vectors.size() != texts.size()) throw std::runtime_error("external encoder: wrong number of outputs");
  std::vector<Matrix> out;
  for (std::size_t k = 0; k < texts.size(); ++k) {
    const Json& rows = vectors[k];
    const int T = static_cast<int>(texts[k].size());
    if (static_cast<int>(rows.size()) != T) {
      throw std::runtime_error("external encoder: output length differs from input length");
    }
    Matrix m(T, dim_);
    for (int t = 0; t < T; ++t) {
      if (static_cast<int>(rows[t].size()) != dim_) {
        throw std::runtime_error("external encoder: vector dimension mismatch");
      }
      for (int j = 0; j < dim_; ++j) m.at(t, j) = rows[t][j].get<double>();
    }
    out.push_back(std::move(m));
  }
  return out;
}

Matrix ExternalEncoder::Encode(const std::u32string& text, std::unique_ptr<EncoderCache>* cache) const {
  if (cache != nullptr) *cache = std::make_unique<EncoderCache>();
  if (text.empty()) return Matrix(0, dim_);
  return EncodeBatch({text}).front();
}

}  // namespace mobilecs::ie
