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

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "mobilecs/util/json_io.hpp"

namespace mobilecs::corpus {

struct EntityTypeDef {
  std::string name;
  std::optional<std::string> parent;
  // Attributes declared on this type only.
  std::set<std::string> own_attributes;
  // Own plus every inherited attribute.
  std::set<std::string> attributes;
  // Roots have depth 0.
  int depth = 0;
};

// Entity-type inheritance forest with per-type attribute inventories, the
// user-profile attribute inventory and the two intent inventories.
class Schema {
 public:
  Schema() = default;

  // Throws ValidationError on unknown parents, cycles or duplicate names.
  static Schema FromJson(const Json& j);
  Json ToJson() const;

  // Builder used by tests and the generator. Finalize() computes closures.
  void AddType(std::string name, std::optional<std::string> parent,
               std::set<std::string> attributes);
  void SetUserAttributes(std::set<std::string> attrs) { user_attributes_ = std::move(attrs); }
  void SetIntents(std::set<std::string> user, std::set<std::string> system);
  void Finalize();

  const EntityTypeDef* Find(std::string_view name) const;
  bool HasType(std::string_view name) const { return Find(name) != nullptr; }

  // True when `type` equals `ancestor` or descends from it.
  bool IsA(std::string_view type, std::string_view ancestor) const;

  bool SlotLegal(std::string_view type, std::string_view slot) const;
  bool IsUserAttribute(std::string_view slot) const;
  // Slot declared anywhere: on some entity type or on the user profile.
  bool IsKnownSlot(std::string_view slot) const;

  const std::set<std::string>& user_attributes() const { return user_attributes_; }
  const std::set<std::string>& user_intents() const { return user_intents_; }
  const std::set<std::string>& system_intents() const { return system_intents_; }
  bool IsIntent(std::string_view name) const;

  // Type names in lexicographic order.
  std::vector<std::string> TypeNames() const;
  // Every attribute declared on some entity type.
  std::set<std::string> EntityAttributes() const;

 private:
  std::map<std::string, EntityTypeDef, std::less<>> types_;
  std::set<std::string> user_attributes_;
  std::set<std::string> user_intents_;
  std::set<std::string> system_intents_;
};

// The illustrative customer-service schema shipped in data/schema.json and
// used by the synthetic generator.
Schema ExampleSchema();

}  // namespace mobilecs::corpus
