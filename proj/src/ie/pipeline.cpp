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

#include "mobilecs/ie/pipeline.hpp"

#include <algorithm>
#include <set>
#include <thread>

#include "mobilecs/corpus/corpus.hpp"
#include "mobilecs/util/json_io.hpp"
#include "mobilecs/util/utf8.hpp"

namespace mobilecs::ie {

using corpus::kUserProfileId;
using corpus::Speaker;

namespace {

constexpr const char* kCheckpointFormat = "mobilecs-ie";
constexpr int kCheckpointVersion = 1;

bool Overlaps(const Span& a, const Span& b) { return a.turn == b.turn && a.start < b.end && b.start < a.end; }

struct Candidate {
  std::string entity;
  Span mention;
};

std::vector<PredictedMention> GoldMentions(const Dialogue& d) {
  std::vector<PredictedMention> out;
  for (const auto& t : d.turns) {
    for (const auto& m : t.mentions) out.push_back({m.span, m.entity_type, m.entity_id});
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.span < b.span; });
  return out;
}

std::vector<PredictedSlot> GoldSlots(const Dialogue& d) {
  std::vector<PredictedSlot> out;
  std::set<std::pair<Span, std::string>> seen;
  for (const auto& t : d.turns) {
    for (const auto& x : t.triples) {
      if (seen.insert({x.value_span, x.slot}).second) out.push_back({x.value_span, x.slot, x.value});
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.span < b.span; });
  return out;
}

// Per entity, its latest mention at or before the slot's turn, within the
// window, not overlapping the slot, and whose type admits the slot.
std::vector<Candidate> Candidates(const std::vector<PredictedMention>& mentions, const PredictedSlot& slot,
                                  const Schema& schema, int window) {
  std::map<std::string, std::string> type;  // entity -> type of its first mention
  std::vector<std::string> order;
  for (const auto& m : mentions) {
    if (type.emplace(m.entity, m.type).second) order.push_back(m.entity);
  }
  std::vector<Candidate> out;
  for (const std::string& e : order) {
    if (!schema.HasType(type[e]) || !schema.SlotLegal(type[e], slot.slot)) continue;
    for (auto it = mentions.rbegin(); it != mentions.rend(); ++it) {
      if (it->entity != e || it->span.turn > slot.span.turn || Overlaps(it->span, slot.span)) continue;
      if (slot.span.turn - it->span.turn <= window) out.push_back({e, it->span});
      break;
    }
  }
  return out;
}

std::vector<std::u32string> DecodedTurns(const Dialogue& d) {
  std::vector<std::u32string> out;
  for (const auto& t : d.turns) out.push_back(utf8::Decode(t.text));
  return out;
}

std::string Slice(const std::vector<std::u32string>& turns, const Span& s) {
  return utf8::Encode(std::u32string_view(turns.at(s.turn)).substr(s.start, s.length()));
}

template <typename F>
auto RunStage(const std::string& stage, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const PipelineError&) {
    throw;
  } catch (const std::exception& e) {
    throw PipelineError(stage, e.what());
  }
}

}  // namespace

JoinedDialogue JoinDialogue(const Dialogue& d) {
  JoinedDialogue j;
  for (const auto& t : d.turns) {
    j.text.push_back(t.speaker == Speaker::kUser ? kUserMarker : kSystemMarker);
    j.turn_offset.push_back(static_cast<int>(j.text.size()));
    j.text += utf8::Decode(t.text);
  }
  return j;
}

AlignmentInput BuildAlignmentInput(const Dialogue& d, const Span& mention, const Span& slot) {
  if (Overlaps(mention, slot)) throw std::invalid_argument("entity and slot spans overlap");
  if (slot.turn < mention.turn) throw std::invalid_argument("slot precedes the entity mention's turn");
  if (slot.turn >= static_cast<int>(d.turns.size())) throw std::invalid_argument("slot turn out of range");
  AlignmentInput in;
  for (int t = mention.turn; t <= slot.turn; ++t) {
    in.text.push_back(kTurnMarker);
    const std::u32string text = utf8::Decode(d.turns[t].text);
    for (int i = 0; i <= static_cast<int>(text.size()); ++i) {
      if (t == mention.turn && i == mention.end) in.text.push_back(kEntityClose);
      if (t == slot.turn && i == slot.end) in.text.push_back(kSlotClose);
      if (t == mention.turn && i == mention.start) {
        in.entity_pos = static_cast<int>(in.text.size());
        in.text.push_back(kEntityOpen);
      }
      if (t == slot.turn && i == slot.start) {
        in.slot_pos = static_cast<int>(in.text.size());
        in.text.push_back(kSlotOpen);
      }
      if (i < static_cast<int>(text.size())) in.text.push_back(text[i]);
    }
  }
  return in;
}

PipelineOutput RunPipeline(const IeModels& models, const Dialogue& d, const Schema& schema,
                           const PipelineOptions& options) {
  if (options.gold_clusters && !options.gold_mentions) {
    throw std::invalid_argument("gold clusters require gold mentions");
  }
  PipelineOutput out;
  const std::vector<std::u32string> turns = DecodedTurns(d);

  out.mentions = RunStage("ner", [&] {
    if (options.gold_mentions) return GoldMentions(d);
    if (models.ner == nullptr) throw std::runtime_error("no model loaded");
    std::vector<PredictedMention> ms;
    for (std::size_t t = 0; t < turns.size(); ++t) {
      for (const TaggedSpan& s : models.ner->Tag(turns[t])) {
        ms.push_back({Span{static_cast<int>(t), s.start, s.end}, s.label, ""});
      }
    }
    return ms;
  });

  RunStage("coreference", [&] {
    if (options.gold_clusters) return 0;
    if (out.mentions.empty()) return 0;
    if (models.coref == nullptr) throw std::runtime_error("no model loaded");
    const JoinedDialogue joined = JoinDialogue(d);
    std::vector<TokenRange> ranges;
    for (const auto& m : out.mentions) {
      const int p = joined.Position(m.span);
      ranges.push_back({p, p + m.span.length()});
    }
    const std::vector<int> cluster =
        ClusterMentions(models.coref->Scores(joined.text, ranges), options.coref_threshold);
    for (std::size_t i = 0; i < cluster.size(); ++i) out.mentions[i].entity = "c" + std::to_string(cluster[i]);
    return 0;
  });

  out.slots = RunStage("slot recognition", [&] {
    if (options.gold_slots) return GoldSlots(d);
    if (models.slots == nullptr) throw std::runtime_error("no model loaded");
    std::vector<PredictedSlot> ss;
    for (std::size_t t = 0; t < turns.size(); ++t) {
      for (const TaggedSpan& s : models.slots->Tag(turns[t])) {
        const Span span{static_cast<int>(t), s.start, s.end};
        ss.push_back({span, s.label, Slice(turns, span)});
      }
    }
    return ss;
  });

  RunStage("alignment", [&] {
    for (const PredictedSlot& slot : out.slots) {
      const std::vector<Candidate> cands = Candidates(out.mentions, slot, schema, options.window);
      if (cands.empty()) {
        if (schema.IsUserAttribute(slot.slot)) {
          out.triples.push_back({std::string(kUserProfileId), slot.slot, slot.value, slot.span});
        } else {
          out.diagnostics.push_back("alignment: slot '" + slot.slot + "' value '" + slot.value +
                                    "' has no candidate entity; dropped");
        }
        continue;
      }
      if (models.aligner == nullptr) throw std::runtime_error("no model loaded");
      const JoinedDialogue joined = JoinDialogue(d);
      const int slot_pos = joined.Position(slot.span);
      const Candidate* best = nullptr;
      double best_p = -1.0;
      int best_dist = 0;
      for (const Candidate& c : cands) {
        const AlignmentInput in = BuildAlignmentInput(d, c.mention, slot.span);
        const double p = models.aligner->Probability(in.text, in.entity_pos, in.slot_pos);
        const int dist = std::abs(slot_pos - joined.Position(c.mention));
        if (p > best_p || (p == best_p && dist < best_dist)) {
          best = &c;
          best_p = p;
          best_dist = dist;
        }
      }
      if (best_p >= 0.5) {
        out.triples.push_back({best->entity, slot.slot, slot.value, slot.span});
      } else {
        out.diagnostics.push_back("alignment: slot '" + slot.slot + "' value '" + slot.value +
                                  "' rejected by every candidate; dropped");
      }
    }
    return 0;
  });
  return out;
}

// ---- bundle ------------------------------------------------------------------

PipelineOptions IeBundle::options() const {
  PipelineOptions o;
  o.coref_threshold = coref_threshold;
  o.window = window;
  return o;
}

Json IeBundle::ToJson() const {
  if (!ner || !coref || !slots || !aligner) throw std::logic_error("incomplete model bundle");
  return {{"format", kCheckpointFormat},
          {"version", kCheckpointVersion},
          {"coref_threshold", coref_threshold},
          {"window", window},
          {"ner", ner->ToJson()},
          {"coref", coref->ToJson()},
          {"slots", slots->ToJson()},
          {"aligner", aligner->ToJson()}};
}

IeBundle IeBundle::FromJson(const Json& j) {
  if (j.value("format", "") != kCheckpointFormat) throw std::runtime_error("not an extraction checkpoint");
  if (j.value("version", 0) != kCheckpointVersion) {
    throw std::runtime_error("unsupported checkpoint version " + j.value("version", Json()).dump());
  }
  IeBundle b;
  b.coref_threshold = j.at("coref_threshold").get<double>();
  b.window = j.at("window").get<int>();
  b.ner = CrfTagger::FromJson(j.at("ner"));
  b.coref = CorefScorer::FromJson(j.at("coref"));
  b.slots = CrfTagger::FromJson(j.at("slots"));
  b.aligner = EntitySlotAligner::FromJson(j.at("aligner"));
  return b;
}

void IeBundle::Save(const std::filesystem::path& file) const { WriteJsonFile(file, ToJson()); }

IeBundle IeBundle::Load(const std::filesystem::path& file) { return FromJson(ReadJsonFile(file)); }

// ---- training ----------------------------------------------------------------

IeTrainOptions IeTrainOptions::FromJson(const Json& j) {
  static const std::set<std::string> known = {"training",       "embed_dim",
                                              "hidden",         "coref_pair_cap",
                                              "window",         "coref_threshold",
                                              "external_encoder_url", "external_encoder_dim",
                                              "parallel"};
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) throw std::invalid_argument("unknown extraction option '" + key + "'");
  }
  IeTrainOptions o;
  if (j.contains("training")) o.training = TrainingConfig::FromJson(j.at("training"), o.training);
  o.embed_dim = j.value("embed_dim", o.embed_dim);
  o.hidden = j.value("hidden", o.hidden);
  o.coref_pair_cap = j.value("coref_pair_cap", o.coref_pair_cap);
  o.window = j.value("window", o.window);
  o.coref_threshold = j.value("coref_threshold", o.coref_threshold);
  o.external_encoder_url = j.value("external_encoder_url", o.external_encoder_url);
  o.external_encoder_dim = j.value("external_encoder_dim", o.external_encoder_dim);
  o.parallel = j.value("parallel", o.parallel);
  if (o.embed_dim <= 0 || o.hidden <= 0 || o.coref_pair_cap <= 0 || o.window < 0) {
    throw std::invalid_argument("extraction options: dimensions and caps must be positive");
  }
  return o;
}

Json IeTrainOptions::ToJson() const {
  return {{"training", training.ToJson()},
          {"embed_dim", embed_dim},
          {"hidden", hidden},
          {"coref_pair_cap", coref_pair_cap},
          {"window", window},
          {"coref_threshold", coref_threshold},
          {"external_encoder_url", external_encoder_url},
          {"external_encoder_dim", external_encoder_dim},
          {"parallel", parallel}};
}

namespace {

struct TaggingExample {
  std::u32string text;
  std::vector<int> gold;
};

struct CorefExample {
  std::u32string text;
  std::vector<TokenRange> mentions;
  std::vector<std::tuple<int, int, bool>> pairs;
};

struct AlignExample {
  AlignmentInput input;
  bool positive = false;
};

void AddTagging(std::vector<TaggingExample>& out, const std::u32string& text, std::vector<LabeledSpan> spans,
                const std::string& where, std::vector<std::string>& diagnostics) {
  if (text.empty()) return;
  std::sort(spans.begin(), spans.end(), [](const auto& a, const auto& b) { return a.start < b.start; });
  try {
    out.push_back({text, SpansToBio(static_cast<int>(text.size()), spans)});
  } catch (const std::exception& e) {
    diagnostics.push_back(where + ": skipped (" + e.what() + ")");
  }
}

}  // namespace

IeTrainResult TrainIe(const std::vector<Dialogue>& train, const Schema& schema, const IeTrainOptions& options) {
  options.training.Validate();
  IeTrainResult result;
  auto& diagnostics = result.diagnostics;

  std::vector<Dialogue> data;
  for (const Dialogue& d : train) {
    auto repaired = corpus::RepairEntityTypes(d, schema);
    for (const auto& diag : repaired.diagnostics) {
      if (diag.unrepairable) diagnostics.push_back(d.id + ": " + diag.entity_id + ": " + diag.message);
    }
    data.push_back(std::move(repaired.dialogue));
  }

  const std::vector<std::string> entity_labels = schema.TypeNames();
  std::vector<std::string> slot_labels;
  {
    std::set<std::string> s = schema.EntityAttributes();
    s.insert(schema.user_attributes().begin(), schema.user_attributes().end());
    slot_labels.assign(s.begin(), s.end());
  }
  auto index_of = [](const std::vector<std::string>& v, const std::string& x) {
    return static_cast<int>(std::find(v.begin(), v.end(), x) - v.begin());
  };

  Vocabulary vocab;
  for (char32_t c = kTurnMarker; c <= kSystemMarker; ++c) vocab.Add(c);

  std::vector<TaggingExample> ner_examples, slot_examples;
  std::vector<CorefExample> coref_examples;
  std::vector<AlignExample> align_examples;
  for (const Dialogue& d : data) {
    const std::vector<std::u32string> turns = DecodedTurns(d);
    for (const auto& t : turns) vocab.AddText(t);

    std::vector<std::vector<LabeledSpan>> ner_spans(turns.size()), slot_spans(turns.size());
    for (const auto& t : d.turns) {
      for (const auto& m : t.mentions) {
        const int k = index_of(entity_labels, m.entity_type);
        if (k < static_cast<int>(entity_labels.size())) {
          ner_spans[m.span.turn].push_back({m.span.start, m.span.end, k});
        }
      }
    }
    const std::vector<PredictedSlot> gold_slots = GoldSlots(d);
    for (const PredictedSlot& s : gold_slots) {
      slot_spans[s.span.turn].push_back({s.span.start, s.span.end, index_of(slot_labels, s.slot)});
    }
    for (std::size_t t = 0; t < turns.size(); ++t) {
      const std::string where = d.id + " turn " + std::to_string(t);
      AddTagging(ner_examples, turns[t], ner_spans[t], where + " mentions", diagnostics);
      AddTagging(slot_examples, turns[t], slot_spans[t], where + " slots", diagnostics);
    }

    const std::vector<PredictedMention> mentions = GoldMentions(d);
    if (mentions.size() >= 2) {
      const JoinedDialogue joined = JoinDialogue(d);
      CorefExample ex{joined.text, {}, {}};
      for (const auto& m : mentions) {
        const int p = joined.Position(m.span);
        ex.mentions.push_back({p, p + m.span.length()});
      }
      const int n = static_cast<int>(mentions.size());
      for (int gap = 1; gap < n && static_cast<int>(ex.pairs.size()) < options.coref_pair_cap; ++gap) {
        for (int i = 0; i + gap < n && static_cast<int>(ex.pairs.size()) < options.coref_pair_cap; ++i) {
          ex.pairs.emplace_back(i, i + gap, mentions[i].entity == mentions[i + gap].entity);
        }
      }
      coref_examples.push_back(std::move(ex));
    }

    for (const auto& t : d.turns) {
      for (const auto& x : t.triples) {
        if (x.is_user_profile()) continue;
        for (const Candidate& c :
             Candidates(mentions, PredictedSlot{x.value_span, x.slot, x.value}, schema, options.window)) {
          align_examples.push_back({BuildAlignmentInput(d, c.mention, x.value_span), c.entity == x.entity_id});
        }
      }
    }
  }

  const std::uint64_t seed = options.training.seed;
  auto make_encoder = [&](std::uint64_t k) -> std::unique_ptr<Encoder> {
    if (!options.external_encoder_url.empty()) {
      return std::make_unique<ExternalEncoder>(options.external_encoder_url, options.external_encoder_dim);
    }
    return std::make_unique<CharBiLstmEncoder>(vocab, options.embed_dim, options.hidden, seed * 101 + k);
  };
  IeBundle& b = result.bundle;
  b.coref_threshold = options.coref_threshold;
  b.window = options.window;
  b.ner = std::make_unique<CrfTagger>(make_encoder(1), BioLabels(entity_labels), seed * 101 + 11);
  b.coref = std::make_unique<CorefScorer>(make_encoder(2));
  b.slots = std::make_unique<CrfTagger>(make_encoder(3), BioLabels(slot_labels), seed * 101 + 13);
  b.aligner = std::make_unique<EntitySlotAligner>(make_encoder(4), seed * 101 + 14);

  auto config_for = [&](std::uint64_t k) {
    TrainingConfig c = options.training;
    c.seed = seed + k;
    return c;
  };
  std::vector<std::function<void()>> jobs = {
      [&] {
        result.epoch_losses["ner"] = TrainLoop(ner_examples.size(), config_for(1), b.ner->Params(), [&](std::size_t i) {
          return b.ner->Accumulate(ner_examples[i].text, ner_examples[i].gold);
        });
      },
      [&] {
        result.epoch_losses["coref"] =
            TrainLoop(coref_examples.size(), config_for(2), b.coref->Params(), [&](std::size_t i) {
              const auto& ex = coref_examples[i];
              return b.coref->Accumulate(ex.text, ex.mentions, ex.pairs);
            });
      },
      [&] {
        result.epoch_losses["slots"] =
            TrainLoop(slot_examples.size(), config_for(3), b.slots->Params(), [&](std::size_t i) {
              return b.slots->Accumulate(slot_examples[i].text, slot_examples[i].gold);
            });
      },
      [&] {
        result.epoch_losses["aligner"] =
            TrainLoop(align_examples.size(), config_for(4), b.aligner->Params(), [&](std::size_t i) {
              const auto& ex = align_examples[i];
              return b.aligner->Accumulate(ex.input.text, ex.input.entity_pos, ex.input.slot_pos, ex.positive);
            });
      }};
  // Each job owns one model; the shared map is pre-populated so the threads
  // only write distinct existing entries.
  for (const char* name : {"ner", "coref", "slots", "aligner"}) result.epoch_losses[name];
  if (options.parallel) {
    std::vector<std::thread> threads;
    std::vector<std::exception_ptr> errors(jobs.size());
    for (std::size_t i = 0; i < jobs.size(); ++i) {
      threads.emplace_back([&, i] {
        try {
          jobs[i]();
        } catch (...) {
          errors[i] = std::current_exception();
        }
      });
    }
    for (auto& t : threads) t.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  } else {
    for (auto& job : jobs) job();
  }
  return result;
}

// ---- evaluation --------------------------------------------------------------

namespace {

metrics::Clustering ClusteringOf(const std::vector<PredictedMention>& mentions) {
  metrics::Clustering c;
  for (const auto& m : mentions) c.emplace(m.span, m.entity);
  return c;
}

std::vector<corpus::TripleAnnotation> AsAnnotations(const std::vector<PredictedTriple>& triples) {
  std::vector<corpus::TripleAnnotation> out;
  for (const auto& t : triples) out.push_back({t.entity, t.slot, t.value, t.value_span});
  return out;
}

// Predicted cluster -> gold entity by majority over exactly matching mention
// spans (ties to the smaller id).
std::map<std::string, std::string> MapClusters(const std::vector<PredictedMention>& predicted,
                                               const std::vector<PredictedMention>& gold) {
  std::map<Span, std::string> gold_at;
  for (const auto& m : gold) gold_at.emplace(m.span, m.entity);
  std::map<std::string, std::map<std::string, int>> votes;
  for (const auto& m : predicted) {
    auto it = gold_at.find(m.span);
    if (it != gold_at.end()) ++votes[m.entity][it->second];
  }
  std::map<std::string, std::string> out;
  for (const auto& [cluster, counts] : votes) {
    int best = 0;
    for (const auto& [entity, n] : counts) {
      if (n > best) {
        best = n;
        out[cluster] = entity;
      }
    }
  }
  out[std::string(kUserProfileId)] = std::string(kUserProfileId);
  return out;
}

struct EsaCounts {
  long correct = 0;
  long total = 0;
};

void CountAlignment(const PipelineOutput& out, const std::vector<PredictedMention>& gold_mentions,
                    const std::vector<corpus::TripleAnnotation>& gold_triples, EsaCounts& counts) {
  const auto mapping = MapClusters(out.mentions, gold_mentions);
  for (const auto& g : gold_triples) {
    ++counts.total;
    for (const auto& p : out.triples) {
      if (p.value_span != g.value_span || p.slot != g.slot) continue;
      auto it = mapping.find(p.entity);
      if (it != mapping.end() && it->second == g.entity_id) {
        ++counts.correct;
        break;
      }
    }
  }
}

}  // namespace

IeEvaluation EvaluateIe(const IeModels& models, const std::vector<Dialogue>& dialogues, const Schema& schema,
                        const PipelineOptions& options) {
  IeEvaluation ev;
  std::vector<metrics::TypedSpan> ner_pred, ner_gold, sr_pred, sr_gold;
  metrics::BCubed ecr_golden, ecr_pipeline;
  metrics::TripleCounts sf_golden, sf_pipeline;
  EsaCounts esa_golden, esa_pipeline;

  PipelineOptions predicted = options;
  predicted.gold_mentions = predicted.gold_clusters = predicted.gold_slots = false;
  PipelineOptions gold_mentions = predicted;
  gold_mentions.gold_mentions = gold_mentions.gold_slots = true;
  PipelineOptions gold_all = gold_mentions;
  gold_all.gold_clusters = true;

  for (const Dialogue& raw : dialogues) {
    const Dialogue d = corpus::RepairEntityTypes(raw, schema).dialogue;
    const std::vector<PredictedMention> gm = GoldMentions(d);
    std::vector<corpus::TripleAnnotation> gt;
    for (const auto& t : d.turns) gt.insert(gt.end(), t.triples.begin(), t.triples.end());
    for (const auto& m : gm) ner_gold.push_back({d.id, m.span, m.type});
    for (const auto& s : GoldSlots(d)) sr_gold.push_back({d.id, s.span, s.slot});
    const metrics::Clustering gold_clustering = ClusteringOf(gm);
    const auto gold_groups = metrics::GroupTriples(gt);

    const PipelineOutput p = RunPipeline(models, d, schema, predicted);
    for (const auto& m : p.mentions) ner_pred.push_back({d.id, m.span, m.type});
    for (const auto& s : p.slots) sr_pred.push_back({d.id, s.span, s.slot});
    ecr_pipeline.Add(ClusteringOf(p.mentions), gold_clustering);
    sf_pipeline += metrics::CountTriples(metrics::GroupTriples(AsAnnotations(p.triples)), gold_groups);
    CountAlignment(p, gm, gt, esa_pipeline);
    for (const auto& diag : p.diagnostics) ev.diagnostics.push_back(d.id + ": " + diag);

    const PipelineOutput c = RunPipeline(models, d, schema, gold_mentions);
    ecr_golden.Add(ClusteringOf(c.mentions), gold_clustering);

    const PipelineOutput g = RunPipeline(models, d, schema, gold_all);
    sf_golden += metrics::CountTriples(metrics::GroupTriples(AsAnnotations(g.triples)), gold_groups);
    CountAlignment(g, gm, gt, esa_golden);
  }
  auto esa = [&](const EsaCounts& c) {
    return c.total == 0 ? 1.0 : static_cast<double>(c.correct) / static_cast<double>(c.total);
  };
  const metrics::PRF ner = metrics::SpanF1(ner_pred, ner_gold);
  const metrics::PRF sr = metrics::SpanF1(sr_pred, sr_gold);
  ev.golden = {ner, ecr_golden.Result(), sr, esa(esa_golden), sf_golden.prf()};
  ev.pipeline = {ner, ecr_pipeline.Result(), sr, esa(esa_pipeline), sf_pipeline.prf()};
  if (esa_golden.total == 0) ev.diagnostics.push_back("no gold slots; alignment accuracy reported as 1");
  return ev;
}

}  // namespace mobilecs::ie
