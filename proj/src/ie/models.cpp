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

#include "mobilecs/ie/models.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "mobilecs/kernels/kernels.hpp"

namespace mobilecs::ie {

namespace k = mobilecs::kernels;

namespace {

std::span<const double> RowSpan(const Matrix& m, int r) { return {m.row(r), static_cast<std::size_t>(m.cols)}; }
std::span<double> RowSpan(Matrix& m, int r) { return {m.row(r), static_cast<std::size_t>(m.cols)}; }

}  // namespace

// ---- CRF tagger --------------------------------------------------------------

CrfTagger::CrfTagger(std::unique_ptr<Encoder> encoder, BioLabels labels, std::uint64_t seed)
    : encoder_(std::move(encoder)),
      labels_(std::move(labels)),
      mask_(TransitionMask::Bio(labels_.size())),
      proj_w_("proj.w", labels_.size(), encoder_->dim()),
      proj_b_("proj.b", labels_.size(), 1),
      transitions_("transitions", labels_.size(), labels_.size()) {
  std::mt19937_64 rng(seed);
  proj_w_.InitUniform(rng, 1.0 / std::sqrt(static_cast<double>(encoder_->dim())));
}

Matrix CrfTagger::Emissions(const std::u32string& text, std::unique_ptr<EncoderCache>* cache) const {
  const Matrix h = encoder_->Encode(text, cache);
  const int L = labels_.size();
  Matrix e(h.rows, L);
  for (int t = 0; t < h.rows; ++t) {
    std::copy(proj_b_.value.begin(), proj_b_.value.end(), e.row(t));
    k::Gemv(proj_w_.value, L, h.cols, RowSpan(h, t), RowSpan(e, t));
  }
  return e;
}

std::vector<int> CrfTagger::Decode(const std::u32string& text) const {
  if (text.empty()) return {};
  Matrix tr(labels_.size(), labels_.size());
  tr.data = transitions_.value;
  return ViterbiDecode(Emissions(text, nullptr), tr, mask_);
}

std::vector<TaggedSpan> CrfTagger::Tag(const std::u32string& text) const {
  std::vector<TaggedSpan> out;
  for (const LabeledSpan& s : BioToSpans(Decode(text))) {
    out.push_back({s.start, s.end, labels_.types().at(s.type)});
  }
  return out;
}

double CrfTagger::Accumulate(const std::u32string& text, const std::vector<int>& gold) {
  if (text.empty()) return 0.0;
  std::unique_ptr<EncoderCache> cache;
  const Matrix h = encoder_->Encode(text, &cache);
  const int L = labels_.size();
  Matrix e(h.rows, L);
  for (int t = 0; t < h.rows; ++t) {
    std::copy(proj_b_.value.begin(), proj_b_.value.end(), e.row(t));
    k::Gemv(proj_w_.value, L, h.cols, RowSpan(h, t), RowSpan(e, t));
  }
  Matrix tr(L, L);
  tr.data = transitions_.value;
  const CrfLoss loss = CrfNll(e, tr, mask_, gold);
  k::Axpy(1.0, loss.d_transitions.data, transitions_.grad);
  Matrix d_h(h.rows, h.cols);
  for (int t = 0; t < h.rows; ++t) {
    const auto de = RowSpan(loss.d_emissions, t);
    k::Axpy(1.0, de, proj_b_.grad);
    k::Ger(1.0, de, RowSpan(h, t), proj_w_.grad);
    k::GemvT(proj_w_.value, L, h.cols, de, RowSpan(d_h, t));
  }
  encoder_->Backward(*cache, d_h);
  return loss.loss;
}

std::vector<Param*> CrfTagger::Params() {
  std::vector<Param*> out = encoder_->Params();
  out.push_back(&proj_w_);
  out.push_back(&proj_b_);
  out.push_back(&transitions_);
  return out;
}

Json CrfTagger::ToJson() const {
  return {{"labels", labels_.types()},
          {"encoder", encoder_->ToJson()},
          {"proj_w", proj_w_.ToJson()},
          {"proj_b", proj_b_.ToJson()},
          {"transitions", transitions_.ToJson()}};
}

std::unique_ptr<CrfTagger> CrfTagger::FromJson(const Json& j) {
  auto t = std::make_unique<CrfTagger>(Encoder::FromJson(j.at("encoder")),
                                       BioLabels(j.at("labels").get<std::vector<std::string>>()), 0);
  t->proj_w_.LoadJson(j.at("proj_w"));
  t->proj_b_.LoadJson(j.at("proj_b"));
  t->transitions_.LoadJson(j.at("transitions"));
  return t;
}

// ---- coreference -------------------------------------------------------------

CorefScorer::CorefScorer(std::unique_ptr<Encoder> encoder) : encoder_(std::move(encoder)) {}

Matrix CorefScorer::MentionVectors(const Matrix& enc, const std::vector<TokenRange>& mentions) const {
  Matrix v(static_cast<int>(mentions.size()), enc.cols);
  for (std::size_t m = 0; m < mentions.size(); ++m) {
    const TokenRange& r = mentions[m];
    if (r.start < 0 || r.end > enc.rows || r.start >= r.end) {
      throw std::invalid_argument("mention range outside encoded text");
    }
    const double w = 1.0 / (r.end - r.start);
    for (int t = r.start; t < r.end; ++t) k::Axpy(w, RowSpan(enc, t), RowSpan(v, static_cast<int>(m)));
  }
  return v;
}

Matrix CorefScorer::Scores(const std::u32string& text, const std::vector<TokenRange>& mentions) const {
  const int n = static_cast<int>(mentions.size());
  Matrix s(n, n);
  if (n == 0) return s;
  const Matrix v = MentionVectors(encoder_->Encode(text, nullptr), mentions);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) s.at(i, j) = s.at(j, i) = k::Dot(RowSpan(v, i), RowSpan(v, j));
  }
  return s;
}

double CorefScorer::Accumulate(const std::u32string& text, const std::vector<TokenRange>& mentions,
                               const std::vector<std::tuple<int, int, bool>>& pairs) {
  if (pairs.empty()) return 0.0;
  std::unique_ptr<EncoderCache> cache;
  const Matrix enc = encoder_->Encode(text, &cache);
  const Matrix v = MentionVectors(enc, mentions);
  Matrix dv(v.rows, v.cols);
  double loss = 0.0;
  for (const auto& [i, j, same] : pairs) {
    const double s = k::Dot(RowSpan(v, i), RowSpan(v, j));
    loss += same ? Softplus(-s) : Softplus(s);
    const double ds = Sigmoid(s) - (same ? 1.0 : 0.0);
    k::Axpy(ds, RowSpan(v, j), RowSpan(dv, i));
    k::Axpy(ds, RowSpan(v, i), RowSpan(dv, j));
  }
  Matrix d_enc(enc.rows, enc.cols);
  for (std::size_t m = 0; m < mentions.size(); ++m) {
    const TokenRange& r = mentions[m];
    const double w = 1.0 / (r.end - r.start);
    for (int t = r.start; t < r.end; ++t) k::Axpy(w, RowSpan(dv, static_cast<int>(m)), RowSpan(d_enc, t));
  }
  encoder_->Backward(*cache, d_enc);
  return loss;
}

Json CorefScorer::ToJson() const { return {{"encoder", encoder_->ToJson()}}; }

std::unique_ptr<CorefScorer> CorefScorer::FromJson(const Json& j) {
  return std::make_unique<CorefScorer>(Encoder::FromJson(j.at("encoder")));
}

std::vector<int> ClusterMentions(const Matrix& scores, double threshold) {
  const int n = scores.rows;
  std::vector<int> cluster(n, -1);
  int next = 0;
  for (int j = 0; j < n; ++j) {
    for (int i = j - 1; i >= 0; --i) {
      if (Sigmoid(scores.at(i, j)) >= threshold) {
        cluster[j] = cluster[i];
        break;
      }
    }
    if (cluster[j] < 0) cluster[j] = next++;
  }
  return cluster;
}

// ---- alignment ---------------------------------------------------------------

EntitySlotAligner::EntitySlotAligner(std::unique_ptr<Encoder> encoder, std::uint64_t seed)
    : encoder_(std::move(encoder)), head_w_("head.w", 1, 2 * encoder_->dim()), head_b_("head.b", 1, 1) {
  std::mt19937_64 rng(seed);
  head_w_.InitUniform(rng, 1.0 / std::sqrt(static_cast<double>(2 * encoder_->dim())));
}

double EntitySlotAligner::Logit(const Matrix& enc, int entity_pos, int slot_pos) const {
  if (entity_pos < 0 || entity_pos >= enc.rows || slot_pos < 0 || slot_pos >= enc.rows) {
    throw std::invalid_argument("marker position outside encoded text");
  }
  const std::size_t d = static_cast<std::size_t>(enc.cols);
  const std::span<const double> w(head_w_.value);
  return head_b_.value[0] + k::Dot(w.subspan(0, d), RowSpan(enc, entity_pos)) +
         k::Dot(w.subspan(d, d), RowSpan(enc, slot_pos));
}

double EntitySlotAligner::Probability(const std::u32string& text, int entity_pos, int slot_pos) const {
  return Sigmoid(Logit(encoder_->Encode(text, nullptr), entity_pos, slot_pos));
}

double EntitySlotAligner::Accumulate(const std::u32string& text, int entity_pos, int slot_pos, bool positive) {
  std::unique_ptr<EncoderCache> cache;
  const Matrix enc = encoder_->Encode(text, &cache);
  const double z = Logit(enc, entity_pos, slot_pos);
  const double dz = Sigmoid(z) - (positive ? 1.0 : 0.0);
  const std::size_t d = static_cast<std::size_t>(enc.cols);
  std::span<double> gw(head_w_.grad);
  k::Axpy(dz, RowSpan(enc, entity_pos), gw.subspan(0, d));
  k::Axpy(dz, RowSpan(enc, slot_pos), gw.subspan(d, d));
  head_b_.grad[0] += dz;
  Matrix d_enc(enc.rows, enc.cols);
  const std::span<const double> w(head_w_.value);
  k::Axpy(dz, w.subspan(0, d), RowSpan(d_enc, entity_pos));
  k::Axpy(dz, w.subspan(d, d), RowSpan(d_enc, slot_pos));
  encoder_->Backward(*cache, d_enc);
  return positive ? Softplus(-z) : Softplus(z);
}

std::vector<Param*> EntitySlotAligner::Params() {
  std::vector<Param*> out = encoder_->Params();
  out.push_back(&head_w_);
  out.push_back(&head_b_);
  return out;
}

Json EntitySlotAligner::ToJson() const {
  return {{"encoder", encoder_->ToJson()}, {"head_w", head_w_.ToJson()}, {"head_b", head_b_.ToJson()}};
}

std::unique_ptr<EntitySlotAligner> EntitySlotAligner::FromJson(const Json& j) {
  auto a = std::make_unique<EntitySlotAligner>(Encoder::FromJson(j.at("encoder")), 0);
  a->head_w_.LoadJson(j.at("head_w"));
  a->head_b_.LoadJson(j.at("head_b"));
  return a;
}

// ---- training ----------------------------------------------------------------

void TrainingConfig::Validate() const {
  if (!(learning_rate > 0) || batch_size <= 0 || epochs <= 0) {
    throw std::invalid_argument("learning_rate, batch_size and epochs must all be positive");
  }
}

TrainingConfig TrainingConfig::FromJson(const Json& j, const TrainingConfig& defaults) {
  TrainingConfig c = defaults;
  c.learning_rate = j.value("learning_rate", c.learning_rate);
  c.batch_size = j.value("batch_size", c.batch_size);
  c.epochs = j.value("epochs", c.epochs);
  c.seed = j.value("seed", c.seed);
  c.Validate();
  return c;
}

Json TrainingConfig::ToJson() const {
  return {{"learning_rate", learning_rate}, {"batch_size", batch_size}, {"epochs", epochs}, {"seed", seed}};
}

std::vector<double> TrainLoop(std::size_t examples, const TrainingConfig& config, std::vector<Param*> params,
                              const std::function<double(std::size_t)>& step) {
  config.Validate();
  AdamConfig adam;
  adam.learning_rate = config.learning_rate;
  Adam optimizer(std::move(params), adam);
  std::mt19937_64 rng(config.seed);
  std::vector<std::size_t> order(examples);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> losses;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    for (std::size_t i = examples; i > 1; --i) std::swap(order[i - 1], order[rng() % i]);
    double total = 0.0;
    int in_batch = 0;
    for (std::size_t idx : order) {
      total += step(idx);
      if (++in_batch == config.batch_size) {
        optimizer.Step(in_batch);
        in_batch = 0;
      }
    }
    if (in_batch > 0) optimizer.Step(in_batch);
    losses.push_back(examples ? total / static_cast<double>(examples) : 0.0);
  }
  return losses;
}

}  // namespace mobilecs::ie
