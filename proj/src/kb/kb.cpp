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

#include "mobilecs/kb/kb.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace mobilecs::kb {

const KBEntity* LocalKB::FindById(const std::string& id) const {
  for (const KBEntity& e : entities) {
    if (e.id == id) return &e;
  }
  return nullptr;
}

Json LocalKB::ToJson() const {
  Json arr = Json::array();
  for (const KBEntity& e : entities) {
    arr.push_back({{"id", e.id}, {"type", e.type}, {"name", e.name}, {"attributes", e.attributes}});
  }
  return {{"entities", std::move(arr)}, {"user_profile", user_profile}};
}

LocalKB LocalKB::FromJson(const Json& j) {
  LocalKB kb;
  for (const Json& e : j.at("entities")) {
    kb.entities.push_back({e.at("id").get<std::string>(), e.at("type").get<std::string>(),
                           e.at("name").get<std::string>(),
                           e.value("attributes", Json::object()).get<std::map<std::string, std::string>>()});
  }
  kb.user_profile = j.value("user_profile", Json::object()).get<std::map<std::string, std::string>>();
  return kb;
}

void KBQuery::Validate() const {
  switch (mode) {
    case QueryMode::kAttributeOfEntity:
      if (!entity_name || !attribute) {
        throw std::invalid_argument("attribute_of_entity query needs entity_name and attribute");
      }
      break;
    case QueryMode::kEntitiesOfType:
      if (!entity_type) throw std::invalid_argument("entities_of_type query needs entity_type");
      break;
    case QueryMode::kUserAttribute:
      if (!attribute) throw std::invalid_argument("user_attribute query needs attribute");
      break;
  }
}

Json KBQuery::ToJson() const {
  static const char* kModes[] = {"attribute_of_entity", "entities_of_type", "user_attribute"};
  Json j = {{"mode", kModes[static_cast<int>(mode)]}};
  if (entity_name) j["entity_name"] = *entity_name;
  if (attribute) j["attribute"] = *attribute;
  if (entity_type) j["entity_type"] = *entity_type;
  return j;
}

std::string_view KBStatusName(KBStatus s) {
  switch (s) {
    case KBStatus::kFound: return "found";
    case KBStatus::kNoEntity: return "no_entity";
    case KBStatus::kNoAttribute: return "no_attribute";
    case KBStatus::kEmpty: return "empty";
  }
  return "empty";
}

KBStatus ParseKBStatus(std::string_view name) {
  for (KBStatus s : {KBStatus::kFound, KBStatus::kNoEntity, KBStatus::kNoAttribute, KBStatus::kEmpty}) {
    if (KBStatusName(s) == name) return s;
  }
  throw std::invalid_argument("unknown kb status '" + std::string(name) + "'");
}

Json KBResult::ToJson() const { return {{"status", KBStatusName(status)}, {"values", values}}; }

KBResult KBResult::FromJson(const Json& j) {
  return {ParseKBStatus(j.at("status").get<std::string>()),
          j.value("values", Json::array()).get<std::vector<std::string>>()};
}

Json UserGoal::ToJson() const {
  Json arr = Json::array();
  for (const GoalTarget& t : requested) {
    Json x = {{"attribute", t.attribute}, {"expected_value", t.expected_value}};
    if (t.user_profile()) {
      x["user_profile"] = true;
    } else {
      x["entity_id"] = t.entity_id;
      x["entity_name"] = t.entity_name;
    }
    arr.push_back(std::move(x));
  }
  return {{"requested", std::move(arr)}, {"intents", intents}};
}

UserGoal UserGoal::FromJson(const Json& j) {
  UserGoal g;
  for (const Json& x : j.at("requested")) {
    g.requested.push_back({x.value("entity_id", ""), x.value("entity_name", ""),
                           x.at("attribute").get<std::string>(),
                           x.at("expected_value").get<std::string>()});
  }
  g.intents = j.value("intents", Json::array()).get<std::vector<std::string>>();
  return g;
}

LocalKB BuildLocalKb(const Dialogue& d, const Schema& schema, std::vector<std::string>* diagnostics) {
  auto note = [&](const std::string& msg) {
    if (diagnostics != nullptr) diagnostics->push_back(d.id + ": " + msg);
  };

  struct Cluster {
    std::string type;
    std::vector<std::string> surfaces;  // first-occurrence order
    std::map<std::string, int> counts;
  };
  std::vector<std::string> order;
  std::map<std::string, Cluster> clusters;
  for (const auto& t : d.turns) {
    for (const auto& m : t.mentions) {
      auto [it, fresh] = clusters.try_emplace(m.entity_id);
      if (fresh) {
        order.push_back(m.entity_id);
        it->second.type = m.entity_type;
      }
      if (it->second.counts[m.surface]++ == 0) it->second.surfaces.push_back(m.surface);
    }
  }

  LocalKB kb;
  std::map<std::string, std::size_t> position;
  for (const std::string& id : order) {
    const Cluster& c = clusters[id];
    std::string name;
    int best = 0;
    for (const std::string& s : c.surfaces) {
      if (c.counts.at(s) > best) {
        best = c.counts.at(s);
        name = s;
      }
    }
    position[id] = kb.entities.size();
    kb.entities.push_back({id, c.type, name, {}});
  }

  for (const auto& t : d.turns) {
    for (const auto& x : t.triples) {
      std::map<std::string, std::string>* target = nullptr;
      if (x.is_user_profile()) {
        target = &kb.user_profile;
      } else {
        auto it = position.find(x.entity_id);
        if (it == position.end()) {
          note("triple (" + x.entity_id + ", " + x.slot + ") has no entity mention; skipped");
          continue;
        }
        KBEntity& e = kb.entities[it->second];
        if (!schema.SlotLegal(e.type, x.slot)) {
          note("slot " + x.slot + " illegal for " + e.type + " (" + e.id + "); skipped");
          continue;
        }
        target = &e.attributes;
      }
      auto [slot, fresh] = target->try_emplace(x.slot, x.value);
      if (!fresh && slot->second != x.value) {
        note("conflict on (" + x.entity_id + ", " + x.slot + "): '" + slot->second + "' -> '" +
             x.value + "'");
        slot->second = x.value;
      }
    }
  }
  return kb;
}

std::optional<KBQuery> QueryFromIntentArgs(const corpus::IntentArgs& args) {
  if (args.entity_name && args.attribute) {
    return KBQuery{QueryMode::kAttributeOfEntity, args.entity_name, args.attribute, std::nullopt};
  }
  if (args.entity_type) {
    return KBQuery{QueryMode::kEntitiesOfType, std::nullopt, std::nullopt, args.entity_type};
  }
  if (args.attribute && !args.entity_name) {
    return KBQuery{QueryMode::kUserAttribute, std::nullopt, args.attribute, std::nullopt};
  }
  return std::nullopt;
}

const KBEntity* ResolveEntity(const LocalKB& kb, const std::string& name) {
  for (const KBEntity& e : kb.entities) {
    if (e.name == name) return &e;
  }
  if (name.empty()) return nullptr;
  const KBEntity* hit = nullptr;
  int hits = 0;
  for (const KBEntity& e : kb.entities) {
    if (e.name.find(name) != std::string::npos) {
      hit = &e;
      ++hits;
    }
  }
  if (hits == 1) return hit;
  if (hits > 1) return nullptr;
  for (const KBEntity& e : kb.entities) {
    if (!e.name.empty() && name.find(e.name) != std::string::npos) {
      hit = &e;
      ++hits;
    }
  }
  return hits == 1 ? hit : nullptr;
}

KBResult KbQuery(const LocalKB& kb, const KBQuery& q, const Schema& schema) {
  q.Validate();
  switch (q.mode) {
    case QueryMode::kAttributeOfEntity: {
      const KBEntity* e = ResolveEntity(kb, *q.entity_name);
      if (e == nullptr) return {KBStatus::kNoEntity, {}};
      auto it = e->attributes.find(*q.attribute);
      if (it == e->attributes.end()) return {KBStatus::kNoAttribute, {}};
      return {KBStatus::kFound, {it->second}};
    }
    case QueryMode::kEntitiesOfType: {
      KBResult r{KBStatus::kEmpty, {}};
      for (const KBEntity& e : kb.entities) {
        if (schema.IsA(e.type, *q.entity_type)) r.values.push_back(e.name);
      }
      if (!r.values.empty()) r.status = KBStatus::kFound;
      return r;
    }
    case QueryMode::kUserAttribute: {
      auto it = kb.user_profile.find(*q.attribute);
      if (it == kb.user_profile.end()) return {KBStatus::kEmpty, {}};
      return {KBStatus::kFound, {it->second}};
    }
  }
  return {KBStatus::kEmpty, {}};
}

UserGoal BuildUserGoal(const Dialogue& d, const LocalKB& kb, const Schema& schema,
                       std::vector<std::string>* diagnostics) {
  UserGoal goal;
  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& t : d.turns) {
    if (t.speaker != corpus::Speaker::kUser) continue;
    for (const auto& intent : t.intents) {
      if (std::find(goal.intents.begin(), goal.intents.end(), intent.name) == goal.intents.end()) {
        goal.intents.push_back(intent.name);
      }
      const auto q = QueryFromIntentArgs(intent.args);
      if (!q || q->mode == QueryMode::kEntitiesOfType) continue;
      const KBResult r = KbQuery(kb, *q, schema);
      if (r.status != KBStatus::kFound) {
        if (diagnostics != nullptr) {
          diagnostics->push_back(d.id + ": goal target (" + q->entity_name.value_or("@user") + ", " +
                                 *q->attribute + ") not in kb (" +
                                 std::string(KBStatusName(r.status)) + ")");
        }
        continue;
      }
      GoalTarget target;
      target.attribute = *q->attribute;
      target.expected_value = r.values.front();
      if (q->mode == QueryMode::kAttributeOfEntity) {
        const KBEntity* e = ResolveEntity(kb, *q->entity_name);
        target.entity_id = e->id;
        target.entity_name = e->name;
      }
      if (seen.insert({target.entity_id, target.attribute}).second) {
        goal.requested.push_back(std::move(target));
      }
    }
  }
  return goal;
}

}  // namespace mobilecs::kb
