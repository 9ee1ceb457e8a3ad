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

// The four-stage extraction pipeline: mention tagging, coreference, slot
// tagging and entity-slot alignment, with per-stage gold injection, training,
// checkpoints and evaluation.

#include <filesystem>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "mobilecs/corpus/schema.hpp"
#include "mobilecs/corpus/types.hpp"
#include "mobilecs/ie/models.hpp"
#include "mobilecs/metrics/metrics.hpp"

namespace mobilecs::ie {

using corpus::Dialogue;
using corpus::Schema;
using corpus::Span;

// Reserved code points (private use area) inserted into model inputs.
inline constexpr char32_t kTurnMarker = U'\uE000';
inline constexpr char32_t kEntityOpen = U'\uE001';
inline constexpr char32_t kEntityClose = U'\uE002';
inline constexpr char32_t kSlotOpen = U'\uE003';
inline constexpr char32_t kSlotClose = U'\uE004';
inline constexpr char32_t kUserMarker = U'\uE005';
inline constexpr char32_t kSystemMarker = U'\uE006';

// A stage failed; what() carries the stage name.
class PipelineError : public std::runtime_error {
 public:
  PipelineError(std::string stage, const std::string& what)
      : std::runtime_error("stage '" + stage + "' failed: " + what), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

// Whole dialogue as one sequence: each turn prefixed by its speaker marker.
struct JoinedDialogue {
  std::u32string text;
  std::vector<int> turn_offset;  // position of each turn's first character

  int Position(const Span& s) const { return turn_offset.at(s.turn) + s.start; }
};
JoinedDialogue JoinDialogue(const Dialogue& d);

struct AlignmentInput {
  std::u32string text;
  int entity_pos = 0;
  int slot_pos = 0;
};

// Turns from the mention's turn to the slot's turn, each prefixed by
// kTurnMarker, with the mention and slot wrapped in their markers. Throws
// std::invalid_argument when the two spans overlap or the slot precedes the
// mention's turn.
AlignmentInput BuildAlignmentInput(const Dialogue& d, const Span& mention, const Span& slot);

struct PipelineOptions {
  bool gold_mentions = false;
  // Requires gold_mentions.
  bool gold_clusters = false;
  bool gold_slots = false;
  double coref_threshold = 0.5;
  // Maximum turn distance between a slot and an entity's latest mention.
  int window = 3;
};

struct PredictedMention {
  Span span;
  std::string type;
  std::string entity;  // cluster id
};

struct PredictedSlot {
  Span span;
  std::string slot;
  std::string value;
};

struct PredictedTriple {
  std::string entity;  // cluster id or corpus::kUserProfileId
  std::string slot;
  std::string value;
  Span value_span;
};

struct PipelineOutput {
  std::vector<PredictedMention> mentions;  // in document order
  std::vector<PredictedSlot> slots;        // in document order
  std::vector<PredictedTriple> triples;
  std::vector<std::string> diagnostics;
};

// Non-owning view of the four stage models.
struct IeModels {
  const SpanTagger* ner = nullptr;
  const MentionPairScorer* coref = nullptr;
  const SpanTagger* slots = nullptr;
  const PairAligner* aligner = nullptr;
};

// Runs the stages in order on one dialogue. Stages replaced by gold labels
// need no model. Entity types in `d` should already be repaired.
PipelineOutput RunPipeline(const IeModels& models, const Dialogue& d, const Schema& schema,
                           const PipelineOptions& options);

// Owning bundle of trained models.
struct IeBundle {
  std::unique_ptr<CrfTagger> ner;
  std::unique_ptr<CorefScorer> coref;
  std::unique_ptr<CrfTagger> slots;
  std::unique_ptr<EntitySlotAligner> aligner;
  double coref_threshold = 0.5;
  int window = 3;

  IeModels view() const { return {ner.get(), coref.get(), slots.get(), aligner.get()}; }
  PipelineOptions options() const;

  Json ToJson() const;
  static IeBundle FromJson(const Json& j);
  void Save(const std::filesystem::path& file) const;
  static IeBundle Load(const std::filesystem::path& file);
};

struct IeTrainOptions {
  TrainingConfig training;
  int embed_dim = 32;
  int hidden = 32;
  // Coreference pairs per dialogue, nearest pairs first.
  int coref_pair_cap = 300;
  int window = 3;
  double coref_threshold = 0.5;
  // When set, every model uses this frozen encoder instead of a BiLSTM.
  std::string external_encoder_url;
  int external_encoder_dim = 0;
  bool parallel = true;

  static IeTrainOptions FromJson(const Json& j);
  Json ToJson() const;
};

struct IeTrainResult {
  IeBundle bundle;
  std::map<std::string, std::vector<double>> epoch_losses;  // per model
  std::vector<std::string> diagnostics;
};

// Repairs entity types, builds the training examples and trains the four
// models (concurrently when `parallel`).
IeTrainResult TrainIe(const std::vector<Dialogue>& train, const Schema& schema, const IeTrainOptions& options);

struct IeEvaluation {
  // Each stage fed gold prerequisites: clustering over gold mentions,
  // alignment over gold mentions, clusters and slots. Mention and slot
  // tagging have no prerequisites and score the same in both modes.
  metrics::IeScores golden;
  // Every stage consumes the previous stage's predictions.
  metrics::IeScores pipeline;
  std::vector<std::string> diagnostics;
};

// Entity-slot alignment accuracy is the fraction of gold entity triples
// whose value span and slot were predicted and attached to the cluster that
// maps (by exact mention overlap majority) to the gold entity.
IeEvaluation EvaluateIe(const IeModels& models, const std::vector<Dialogue>& dialogues, const Schema& schema,
                        const PipelineOptions& options = {});

}  // namespace mobilecs::ie
