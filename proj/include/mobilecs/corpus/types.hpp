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

// Dialogue data model. Spans are half-open [start, end) over Unicode scalar
// values of the turn text they name.

#include <compare>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mobilecs::corpus {

// Entity id reserved for the user's account profile in triple annotations.
inline constexpr std::string_view kUserProfileId = "@user";

enum class Speaker { kUser, kSystem };

std::string_view SpeakerName(Speaker s);
Speaker ParseSpeaker(std::string_view name);

// The three redundant-turn patterns, plus `kNone`. Lives here because the
// synthetic generator tags planted turns with it.
enum class RedundancyCase { kNone, kRepetition, kConfirmation, kInterjection };

std::string_view RedundancyCaseName(RedundancyCase c);
RedundancyCase ParseRedundancyCase(std::string_view name);

struct Span {
  int turn = 0;
  int start = 0;
  int end = 0;

  int length() const { return end - start; }
  auto operator<=>(const Span&) const = default;
};

struct Mention {
  Span span;
  std::string surface;
  std::string entity_id;
  std::string entity_type;

  bool operator==(const Mention&) const = default;
};

struct TripleAnnotation {
  std::string entity_id;
  std::string slot;
  std::string value;
  Span value_span;

  bool is_user_profile() const { return entity_id == kUserProfileId; }
  bool operator==(const TripleAnnotation&) const = default;
};

struct IntentArgs {
  std::optional<std::string> entity_name;
  std::optional<std::string> attribute;
  std::optional<std::string> entity_type;

  bool empty() const { return !entity_name && !attribute && !entity_type; }
  bool operator==(const IntentArgs&) const = default;
};

struct Intent {
  std::string name;
  IntentArgs args;

  bool operator==(const Intent&) const = default;
};

struct Turn {
  int index = 0;
  Speaker speaker = Speaker::kUser;
  std::string text;
  std::vector<Mention> mentions;
  std::vector<TripleAnnotation> triples;
  std::vector<Intent> intents;
  // Set only by the synthetic generator on turns it planted as redundant.
  RedundancyCase planted = RedundancyCase::kNone;

  bool operator==(const Turn&) const = default;
};

struct Dialogue {
  std::string id;
  std::vector<Turn> turns;

  bool operator==(const Dialogue&) const = default;
};

enum class SplitTag { kTrain, kDev, kTest };

std::string_view SplitTagName(SplitTag s);
SplitTag ParseSplitTag(std::string_view name);

struct CorpusSplit {
  std::vector<Dialogue> train;
  std::vector<Dialogue> dev;
  std::vector<Dialogue> test;

  std::vector<Dialogue>& at(SplitTag tag);
  const std::vector<Dialogue>& at(SplitTag tag) const;
  std::size_t size() const { return train.size() + dev.size() + test.size(); }
  bool operator==(const CorpusSplit&) const = default;
};

}  // namespace mobilecs::corpus
