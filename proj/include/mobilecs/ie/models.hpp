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

// Trainable stage models: the CRF span tagger (entity mentions and slot
// values), the mention-pair coreference scorer and the entity-slot aligner.

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "mobilecs/ie/crf.hpp"
#include "mobilecs/ie/encoder.hpp"

namespace mobilecs::ie {

struct TaggedSpan {
  int start = 0;
  int end = 0;
  std::string label;

  auto operator<=>(const TaggedSpan&) const = default;
};

class SpanTagger {
 public:
  virtual ~SpanTagger() = default;
  virtual std::vector<TaggedSpan> Tag(const std::u32string& text) const = 0;
};

// Positions of mentions inside one encoded text, half-open.
struct TokenRange {
  int start = 0;
  int end = 0;
};

class MentionPairScorer {
 public:
  virtual ~MentionPairScorer() = default;
  // Symmetric n x n matrix of pair scores (logits) for mentions of one text.
  virtual Matrix Scores(const std::u32string& text, const std::vector<TokenRange>& mentions) const = 0;
};

class PairAligner {
 public:
  virtual ~PairAligner() = default;
  // Probability that the marked slot belongs to the marked entity; the two
  // positions index the opening markers inside `text`.
  virtual double Probability(const std::u32string& text, int entity_pos, int slot_pos) const = 0;
};

class CrfTagger : public SpanTagger {
 public:
  CrfTagger(std::unique_ptr<Encoder> encoder, BioLabels labels, std::uint64_t seed);

  std::vector<TaggedSpan> Tag(const std::u32string& text) const override;
  std::vector<int> Decode(const std::u32string& text) const;
  Matrix Emissions(const std::u32string& text, std::unique_ptr<EncoderCache>* cache) const;
  // Forward and backward pass on one example; returns its loss.
  double Accumulate(const std::u32string& text, const std::vector<int>& gold);

  const BioLabels& labels() const { return labels_; }
  const TransitionMask& mask() const { return mask_; }
  const Param& transitions() const { return transitions_; }
  std::vector<Param*> Params();
  Json ToJson() const;
  static std::unique_ptr<CrfTagger> FromJson(const Json& j);

 private:
  std::unique_ptr<Encoder> encoder_;
  BioLabels labels_;
  TransitionMask mask_;
  Param proj_w_;  // L x d
  Param proj_b_;  // L x 1
  Param transitions_;  // L x L
};

// score(a, b) = mean(enc[a]) . mean(enc[b]).
class CorefScorer : public MentionPairScorer {
 public:
  explicit CorefScorer(std::unique_ptr<Encoder> encoder);

  Matrix Scores(const std::u32string& text, const std::vector<TokenRange>& mentions) const override;
  // Binary cross-entropy summed over the given pairs (i, j, same-entity).
  double Accumulate(const std::u32string& text, const std::vector<TokenRange>& mentions,
                    const std::vector<std::tuple<int, int, bool>>& pairs);

  std::vector<Param*> Params() { return encoder_->Params(); }
  Json ToJson() const;
  static std::unique_ptr<CorefScorer> FromJson(const Json& j);

 private:
  Matrix MentionVectors(const Matrix& enc, const std::vector<TokenRange>& mentions) const;
  std::unique_ptr<Encoder> encoder_;
};

// p = sigmoid(w . [enc[entity_pos]; enc[slot_pos]] + b).
class EntitySlotAligner : public PairAligner {
 public:
  EntitySlotAligner(std::unique_ptr<Encoder> encoder, std::uint64_t seed);

  double Probability(const std::u32string& text, int entity_pos, int slot_pos) const override;
  double Accumulate(const std::u32string& text, int entity_pos, int slot_pos, bool positive);

  std::vector<Param*> Params();
  Json ToJson() const;
  static std::unique_ptr<EntitySlotAligner> FromJson(const Json& j);

 private:
  double Logit(const Matrix& enc, int entity_pos, int slot_pos) const;
  std::unique_ptr<Encoder> encoder_;
  Param head_w_;  // 1 x 2d
  Param head_b_;  // 1 x 1
};

// Greedy left-to-right linking: mention j joins the cluster of its nearest
// preceding mention i with sigmoid(scores(i, j)) >= threshold, otherwise it
// opens a new cluster. Returns a cluster index per mention.
std::vector<int> ClusterMentions(const Matrix& scores, double threshold);

struct TrainingConfig {
  double learning_rate = 1e-3;
  int batch_size = 64;
  int epochs = 20;
  std::uint64_t seed = 13;

  // Throws std::invalid_argument unless all three are positive.
  void Validate() const;
  // Missing keys keep the values of `defaults`.
  static TrainingConfig FromJson(const Json& j, const TrainingConfig& defaults);
  Json ToJson() const;
};

// Shuffled mini-batch Adam. `step(i)` runs forward/backward for example i and
// returns its loss. Returns the mean loss of each epoch.
std::vector<double> TrainLoop(std::size_t examples, const TrainingConfig& config,
                              std::vector<Param*> params, const std::function<double(std::size_t)>& step);

}  // namespace mobilecs::ie
