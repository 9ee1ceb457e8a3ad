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

// Per-dialogue local knowledge base, user goal and the single query function
// the dialogue runtime uses for every lookup.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mobilecs/corpus/schema.hpp"
#include "mobilecs/corpus/types.hpp"
#include "mobilecs/util/json_io.hpp"

namespace mobilecs::kb {

using corpus::Dialogue;
using corpus::Schema;

struct KBEntity {
  std::string id;
  std::string type;
  std::string name;
  std::map<std::string, std::string> attributes;

  bool operator==(const KBEntity&) const = default;
};

struct LocalKB {
  std::vector<KBEntity> entities;
  std::map<std::string, std::string> user_profile;

  const KBEntity* FindById(const std::string& id) const;
  Json ToJson() const;
  static LocalKB FromJson(const Json& j);
  bool operator==(const LocalKB&) const = default;
};

enum class QueryMode { kAttributeOfEntity, kEntitiesOfType, kUserAttribute };

struct KBQuery {
  QueryMode mode = QueryMode::kAttributeOfEntity;
  std::optional<std::string> entity_name;
  std::optional<std::string> attribute;
  std::optional<std::string> entity_type;

  // Throws std::invalid_argument when the fields required by `mode` are unset.
  void Validate() const;
  Json ToJson() const;
  bool operator==(const KBQuery&) const = default;
};

enum class KBStatus { kFound, kNoEntity, kNoAttribute, kEmpty };

std::string_view KBStatusName(KBStatus s);
KBStatus ParseKBStatus(std::string_view name);

struct KBResult {
  KBStatus status = KBStatus::kEmpty;
  std::vector<std::string> values;

  Json ToJson() const;
  static KBResult FromJson(const Json& j);
  bool operator==(const KBResult&) const = default;
};

struct GoalTarget {
  // Empty for user-profile targets.
  std::string entity_id;
  std::string entity_name;
  std::string attribute;
  std::string expected_value;

  bool user_profile() const { return entity_id.empty(); }
  bool operator==(const GoalTarget&) const = default;
};

struct UserGoal {
  std::vector<GoalTarget> requested;
  std::vector<std::string> intents;

  Json ToJson() const;
  static UserGoal FromJson(const Json& j);
  bool operator==(const UserGoal&) const = default;
};

// One entity per mention cluster in first-mention order. The name is the most
// frequent mention surface (ties go to the earliest); the type is that of the
// cluster's first mention. User-profile triples fill `user_profile`. A slot
// annotated twice keeps the later value. Conflicts and triples whose slot is
// illegal for the entity type are reported in `diagnostics` and skipped
// (illegal) or overwritten (conflict).
LocalKB BuildLocalKb(const Dialogue& d, const Schema& schema,
                     std::vector<std::string>* diagnostics = nullptr);

// Targets are the attributes queried in user-side intents whose value the kb
// holds, deduplicated in first-query order; intents are user intent names in
// first-occurrence order. Unresolvable queries are reported in `diagnostics`.
UserGoal BuildUserGoal(const Dialogue& d, const LocalKB& kb, const Schema& schema,
                       std::vector<std::string>* diagnostics = nullptr);

// Exact name first, then the unique entity whose name contains `name`, then
// the unique entity whose name occurs inside `name`. Ambiguity gives nullptr.
const KBEntity* ResolveEntity(const LocalKB& kb, const std::string& name);

KBResult KbQuery(const LocalKB& kb, const KBQuery& q, const Schema& schema);

// Maps intent arguments to a query: entity_name with attribute selects
// attribute_of_entity, entity_type selects entities_of_type, attribute alone
// selects user_attribute. Anything else yields no query.
std::optional<KBQuery> QueryFromIntentArgs(const corpus::IntentArgs& args);

}  // namespace mobilecs::kb
