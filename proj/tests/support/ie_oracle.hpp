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

// Stage models that answer from gold annotations, for composing the pipeline
// without training.

#include <algorithm>
#include <map>
#include <tuple>

#include "mobilecs/ie/pipeline.hpp"
#include "mobilecs/util/utf8.hpp"

namespace mobilecs::testing {

class OracleTagger : public ie::SpanTagger {
 public:
  void Add(const std::string& text, ie::TaggedSpan span) {
    auto& v = spans_[utf8::Decode(text)];
    if (std::find(v.begin(), v.end(), span) == v.end()) v.push_back(std::move(span));
  }
  std::vector<ie::TaggedSpan> Tag(const std::u32string& text) const override {
    auto it = spans_.find(text);
    return it == spans_.end() ? std::vector<ie::TaggedSpan>{} : it->second;
  }

 private:
  std::map<std::u32string, std::vector<ie::TaggedSpan>> spans_;
};

class OracleCoref : public ie::MentionPairScorer {
 public:
  void Add(const std::u32string& text, int start, std::string entity) { entity_[{text, start}] = std::move(entity); }
  ie::Matrix Scores(const std::u32string& text, const std::vector<ie::TokenRange>& mentions) const override {
    const int n = static_cast<int>(mentions.size());
    ie::Matrix s(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        auto a = entity_.find({text, mentions[i].start});
        auto b = entity_.find({text, mentions[j].start});
        s.at(i, j) = (a != entity_.end() && b != entity_.end() && a->second == b->second) ? 10.0 : -10.0;
      }
    }
    return s;
  }

 private:
  std::map<std::pair<std::u32string, int>, std::string> entity_;
};

class OracleAligner : public ie::PairAligner {
 public:
  void Add(const ie::AlignmentInput& in, double p) { p_[{in.text, in.entity_pos, in.slot_pos}] = p; }
  double Probability(const std::u32string& text, int entity_pos, int slot_pos) const override {
    auto it = p_.find({text, entity_pos, slot_pos});
    return it == p_.end() ? fallback : it->second;
  }
  double fallback = 0.0;

 private:
  std::map<std::tuple<std::u32string, int, int>, double> p_;
};

// All four oracles for a set of dialogues (types as annotated).
struct OracleModels {
  OracleTagger ner;
  OracleCoref coref;
  OracleTagger slots;
  OracleAligner aligner;

  explicit OracleModels(const std::vector<corpus::Dialogue>& dialogues) {
    for (const auto& d : dialogues) {
      const ie::JoinedDialogue joined = ie::JoinDialogue(d);
      std::vector<std::pair<corpus::Span, std::string>> mentions;
      for (const auto& t : d.turns) {
        for (const auto& m : t.mentions) {
          ner.Add(t.text, {m.span.start, m.span.end, m.entity_type});
          coref.Add(joined.text, joined.Position(m.span), m.entity_id);
          mentions.emplace_back(m.span, m.entity_id);
        }
      }
      for (const auto& t : d.turns) {
        for (const auto& x : t.triples) {
          slots.Add(d.turns[x.value_span.turn].text, {x.value_span.start, x.value_span.end, x.slot});
          for (const auto& [span, entity] : mentions) {
            if (span.turn > x.value_span.turn) continue;
            try {
              aligner.Add(ie::BuildAlignmentInput(d, span, x.value_span), entity == x.entity_id ? 1.0 : 0.0);
            } catch (const std::invalid_argument&) {
            }
          }
        }
      }
    }
  }

  ie::IeModels view() const { return {&ner, &coref, &slots, &aligner}; }
};

}  // namespace mobilecs::testing
