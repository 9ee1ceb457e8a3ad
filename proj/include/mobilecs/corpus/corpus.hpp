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

// Canonical JSON corpus format, validation and schema-driven type repair.
//
// Corpus directory: any number of *.json files, each
//   {"split": "train"|"dev"|"test", "dialogues": [Dialogue...]}
// read in file-name order.

#include <filesystem>
#include <string>
#include <vector>

#include "mobilecs/corpus/schema.hpp"
#include "mobilecs/corpus/types.hpp"
#include "mobilecs/util/json_io.hpp"

namespace mobilecs::corpus {

Json ToJson(const Span& s);
Json ToJson(const Intent& intent);
Json ToJson(const Turn& turn);
Json ToJson(const Dialogue& d);

Span SpanFromJson(const Json& j);
Intent IntentFromJson(const Json& j);
Dialogue DialogueFromJson(const Json& j);

struct ValidationOptions {
  // Also require every triple slot to be legal for its entity's type. Off at
  // load time because type repair runs afterwards and fixes exactly that.
  bool require_legal_slots = false;
};

// Throws ValidationError naming the dialogue id and the violated rule.
void ValidateDialogue(const Dialogue& d, const Schema& schema,
                      const ValidationOptions& options = {});

CorpusSplit LoadCorpus(const std::filesystem::path& dir, const Schema& schema);
Schema LoadSchema(const std::filesystem::path& file);

// Writes train.json / dev.json / test.json (empty splits are skipped).
void WriteCorpus(const std::filesystem::path& dir, const CorpusSplit& corpus);

struct RepairDiagnostic {
  std::string entity_id;
  std::string from_type;
  std::string to_type;
  bool unrepairable = false;
  std::string message;
};

struct RepairResult {
  Dialogue dialogue;
  std::vector<RepairDiagnostic> diagnostics;
};

// Retypes each entity cluster from the slots observed for it.
//
// Entities without triples are left alone. If the annotated type already
// covers every observed slot it is kept (no widening, no unsupported
// narrowing). Otherwise the entity moves to the most general type(s) whose
// inventory covers the slots, preferring the deepest of those and then the
// lexicographically smallest name. No covering type -> `unrepairable`.
RepairResult RepairEntityTypes(const Dialogue& d, const Schema& schema);

}  // namespace mobilecs::corpus
