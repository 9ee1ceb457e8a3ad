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

#include <cstdint>

#include "mobilecs/corpus/schema.hpp"
#include "mobilecs/corpus/types.hpp"

namespace mobilecs::corpus {

struct SynthConfig {
  std::uint64_t seed = 7;
  int n_dialogues = 100;
  // Target fraction of turns that are planted redundant turns.
  double redundancy_rate = 0.15;
  // Probability that a child-typed entity is annotated with its parent type.
  double type_confusion_rate = 0.1;
};

// Seed-reproducible customer-service dialogues with gold mentions, clusters,
// triples and intents, plus planted redundant turns (tagged on the turns).
// Requires the entity types and slots of ExampleSchema(); throws
// std::invalid_argument otherwise. Splits are 80/10/10 train/dev/test.
CorpusSplit SynthesizeCorpus(const SynthConfig& config, const Schema& schema);

inline CorpusSplit SynthesizeCorpus(std::uint64_t seed, int n_dialogues,
                                    const Schema& schema) {
  SynthConfig config;
  config.seed = seed;
  config.n_dialogues = n_dialogues;
  return SynthesizeCorpus(config, schema);
}

}  // namespace mobilecs::corpus
