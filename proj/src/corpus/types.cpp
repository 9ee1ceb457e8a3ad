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

#include "mobilecs/corpus/types.hpp"

#include <stdexcept>
#include <string>

namespace mobilecs::corpus {

std::string_view SpeakerName(Speaker s) {
  return s == Speaker::kUser ? "user" : "system";
}

Speaker ParseSpeaker(std::string_view name) {
  if (name == "user") return Speaker::kUser;
  if (name == "system") return Speaker::kSystem;
  throw std::invalid_argument("unknown speaker '" + std::string(name) + "'");
}

std::string_view RedundancyCaseName(RedundancyCase c) {
  switch (c) {
    case RedundancyCase::kNone: return "none";
    case RedundancyCase::kRepetition: return "repetition";
    case RedundancyCase::kConfirmation: return "confirmation";
    case RedundancyCase::kInterjection: return "interjection";
  }
  return "none";
}

RedundancyCase ParseRedundancyCase(std::string_view name) {
  if (name == "none") return RedundancyCase::kNone;
  if (name == "repetition") return RedundancyCase::kRepetition;
  if (name == "confirmation") return RedundancyCase::kConfirmation;
  if (name == "interjection") return RedundancyCase::kInterjection;
  throw std::invalid_argument("unknown redundancy case '" + std::string(name) + "'");
}

std::string_view SplitTagName(SplitTag s) {
  switch (s) {
    case SplitTag::kTrain: return "train";
    case SplitTag::kDev: return "dev";
    case SplitTag::kTest: return "test";
  }
  return "train";
}

SplitTag ParseSplitTag(std::string_view name) {
  if (name == "train") return SplitTag::kTrain;
  if (name == "dev") return SplitTag::kDev;
  if (name == "test") return SplitTag::kTest;
  throw std::invalid_argument("unknown split '" + std::string(name) + "'");
}

std::vector<Dialogue>& CorpusSplit::at(SplitTag tag) {
  switch (tag) {
    case SplitTag::kTrain: return train;
    case SplitTag::kDev: return dev;
    case SplitTag::kTest: return test;
  }
  return train;
}

const std::vector<Dialogue>& CorpusSplit::at(SplitTag tag) const {
  return const_cast<CorpusSplit*>(this)->at(tag);
}

}  // namespace mobilecs::corpus
