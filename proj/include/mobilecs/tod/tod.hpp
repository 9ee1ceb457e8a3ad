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

// Per-turn dialogue runtime: entity-name history, user intent, KB query,
// system intent and response, over a pluggable generator.

#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mobilecs/corpus/schema.hpp"
#include "mobilecs/corpus/types.hpp"
#include "mobilecs/kb/kb.hpp"
#include "mobilecs/metrics/metrics.hpp"
#include "mobilecs/util/json_io.hpp"

namespace mobilecs::tod {

using corpus::Dialogue;
using corpus::Intent;
using corpus::Schema;

struct TurnRecord {
  // Names known before this turn, deduplicated, in first-mention order.
  std::vector<std::string> entity_name_history;
  std::string user_utterance;
  std::optional<std::string> predicted_entity;
  std::vector<Intent> user_intents;
  kb::KBResult kb_result;
  std::vector<Intent> system_intents;
  std::string response;

  Json ToJson() const;
  static TurnRecord FromJson(const Json& j);
  bool operator==(const TurnRecord&) const = default;
};

// ---- flat serialization ------------------------------------------------------
//
// Conditioning: "[EH] name1 [SEP] name2 [U] utterance".
// Generation side appends " [EN] entity [UI] intents [KB] result [SI] intents
// [R] response" with intents and results as compact JSON. Inside fields '\'
// and '[' are backslash-escaped, so delimiters never occur in field text.

std::string SerializeContext(const std::vector<std::string>& history, const std::string& utterance);
// Conditioning plus the fields known before the system stage.
std::string SerializeSystemContext(const std::vector<std::string>& history, const std::string& utterance,
                                   const std::optional<std::string>& entity, const std::vector<Intent>& user_intents,
                                   const kb::KBResult& kb_result);
std::string SerializeTurnRecord(const TurnRecord& r);

// Parses any prefix produced by the serializers above; absent fields stay
// default. Throws std::invalid_argument on malformed input.
TurnRecord ParseTurnRecord(const std::string& text);

// ---- generators --------------------------------------------------------------

struct UserPrediction {
  std::optional<std::string> entity;
  std::vector<Intent> intents;
};

struct SystemPrediction {
  std::vector<Intent> intents;
  std::string response;
};

// Sees only serialized contexts; the KB reaches it solely as the injected
// result inside the system-stage context.
class Generator {
 public:
  virtual ~Generator() = default;
  virtual UserPrediction PredictUser(const std::string& context) = 0;
  virtual SystemPrediction PredictSystem(const std::string& context) = 0;
};

class TodError : public std::runtime_error {
 public:
  TodError(std::string stage, const std::string& what)
      : std::runtime_error("turn stage '" + stage + "' failed: " + what), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

struct Session {
  kb::LocalKB kb;
  std::vector<std::string> history;
  std::vector<TurnRecord> records;
  std::vector<std::string> log;
};

// The query of the first user intent carrying arguments. No such intent ->
// empty result; arguments that map to no query -> empty result plus a log line.
kb::KBResult ResultForIntents(const kb::LocalKB& kb, const std::vector<Intent>& intents, const Schema& schema,
                              std::vector<std::string>* log = nullptr);

// Runs one turn and appends its record to the session.
TurnRecord StepTurn(Session& session, const std::string& utterance, Generator& generator, const Schema& schema);

// One user block (consecutive user turns) and the system block that answers
// it. System turns before the first user turn and a trailing unanswered user
// block are not exchanges.
struct Exchange {
  std::string user_utterance;
  std::optional<std::string> entity;
  std::vector<Intent> user_intents;
  std::vector<Intent> system_intents;
  std::string response;
};

// `kb` names the entity of an exchange whose intents carry no entity name.
std::vector<Exchange> ExtractExchanges(const Dialogue& d, const kb::LocalKB& kb);

// Replays gold exchanges in order.
class OracleGenerator : public Generator {
 public:
  explicit OracleGenerator(std::vector<Exchange> exchanges) : exchanges_(std::move(exchanges)) {}
  UserPrediction PredictUser(const std::string& context) override;
  SystemPrediction PredictSystem(const std::string& context) override;

 private:
  std::vector<Exchange> exchanges_;
  std::size_t cursor_ = 0;
};

// Retrieval and template baseline built from training dialogues.
class BaselineGenerator : public Generator {
 public:
  struct Entry {
    std::string user;      // delexicalized
    std::vector<Intent> user_intents;
    std::vector<Intent> system_intents;
    std::string response;  // template
  };

  // Throws std::invalid_argument when there is nothing to index.
  BaselineGenerator(std::vector<Entry> entries, std::vector<std::string> names, std::vector<std::string> surfaces);
  static BaselineGenerator Build(const std::vector<Dialogue>& train, const Schema& schema);

  UserPrediction PredictUser(const std::string& context) override;
  SystemPrediction PredictSystem(const std::string& context) override;

  // Entity prediction from the utterance and history alone.
  std::optional<std::string> PredictEntity(const std::vector<std::string>& history, const std::string& utterance) const;
  // Index of the nearest training exchange.
  std::size_t Nearest(const std::string& utterance, const std::optional<std::string>& entity) const;
  const std::vector<Entry>& entries() const { return entries_; }

  Json ToJson() const;
  static BaselineGenerator FromJson(const Json& j);

  static const std::string& ApologyResponse();

 private:
  std::string Delexicalize(const std::string& utterance, const std::optional<std::string>& entity) const;

  std::vector<Entry> entries_;
  std::vector<std::string> names_;     // entity names seen in training
  std::vector<std::string> surfaces_;  // every mention surface, longest first
  std::vector<std::vector<std::u32string>> grams_;
};

// POSTs {"stage": "user"|"system", "context": ...}. The user stage answers
// {"entity": string|null, "user_intents": [...]}, the system stage
// {"system_intents": [...], "response": string}.
class ExternalGenerator : public Generator {
 public:
  explicit ExternalGenerator(std::string url) : url_(std::move(url)) {}
  UserPrediction PredictUser(const std::string& context) override;
  SystemPrediction PredictSystem(const std::string& context) override;

 private:
  Json Call(const std::string& stage, const std::string& context) const;
  std::string url_;
};

// ---- corpus-mode evaluation --------------------------------------------------

using GeneratorFactory = std::function<std::unique_ptr<Generator>(const Dialogue&, const std::vector<Exchange>&)>;

struct TodEvaluation {
  metrics::TodScores scores;
  std::vector<std::vector<TurnRecord>> records;  // per dialogue
  // Records whose kb_result differs from re-running the query.
  long kb_inconsistencies = 0;
  long turns = 0;
  std::vector<std::string> log;
};

// Gold user utterances are replayed, the generator produces everything else.
// Entity types are repaired before building each local KB and goal.
TodEvaluation EvaluateTod(const std::vector<Dialogue>& dialogues, const Schema& schema,
                          const GeneratorFactory& factory);

}  // namespace mobilecs::tod
