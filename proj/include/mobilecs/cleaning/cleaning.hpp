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

// Detection and removal of redundant turns in spoken transcripts: requests
// for repetition, echo confirmations and back-channel interjections.

#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "mobilecs/corpus/types.hpp"
#include "mobilecs/util/json_io.hpp"

namespace mobilecs::cleaning {

using corpus::Dialogue;
using corpus::RedundancyCase;

struct CleaningConfig {
  // Turn i-1 must contain one of these for a repetition verdict.
  std::set<std::string> repetition_lexicon = {"再说一下", "再说一遍", "没听清", "再重复一下",
                                              "重复一遍", "说什么"};
  // Dice(turn i, turn i-2) must exceed this for a repetition verdict.
  double repetition_threshold = 0.5;
  // Dice(turn i-1, some earlier turn) must reach this for an echo.
  double overlap_threshold = 0.6;
  std::set<std::string> ack_lexicon = {"对", "是的", "对的", "嗯对", "对对", "是", "是啊", "没错"};
  int ack_len = 4;
  std::set<std::string> interjection_lexicon = {"嗯", "嗯嗯", "哦", "啊", "噢", "哦哦"};
  int interjection_len = 2;

  // Missing keys keep their defaults; unknown keys are rejected.
  static CleaningConfig FromJson(const Json& j);
  Json ToJson() const;
};

struct RedundancyVerdict {
  RedundancyCase redundancy = RedundancyCase::kNone;
  int turn_index = 0;
  std::string evidence;  // empty iff redundancy == kNone
};

struct CleaningStats {
  int dialogues = 0;
  int turns_before = 0;
  int turns_after = 0;
  int repetitions = 0;
  int confirmations = 0;
  int interjections = 0;
  // Annotations that lived on deleted redundant turns.
  int dropped_mentions = 0;
  int dropped_triples = 0;
  int dropped_intents = 0;

  int turns_removed() const { return turns_before - turns_after; }
  double removed_fraction() const {
    return turns_before == 0 ? 0.0 : static_cast<double>(turns_removed()) / turns_before;
  }
  CleaningStats& operator+=(const CleaningStats& o);
  Json ToJson() const;
};

// Raised when deleting or merging turns would leave a surviving annotation
// pointing into a removed turn or a triple without any entity mention.
class OrphanedAnnotationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Set-based character-bigram Dice coefficient. Strings shorter than two
// characters contribute their single character as the only unit.
double BigramDice(const std::string& a, const std::string& b);

// Requires 1 <= i < d.turns.size(); otherwise returns kNone.
RedundancyVerdict ClassifyRedundantTurn(const Dialogue& d, int i, const CleaningConfig& cfg);

struct CleanResult {
  Dialogue dialogue;
  CleaningStats stats;
};

// Applies the first verdict found scanning left to right, then rescans until
// no verdict fires.
CleanResult CleanDialogue(const Dialogue& d, const CleaningConfig& cfg);

}  // namespace mobilecs::cleaning
