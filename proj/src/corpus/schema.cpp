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

#include "mobilecs/corpus/schema.hpp"

#include "mobilecs/util/errors.hpp"

namespace mobilecs::corpus {

void Schema::AddType(std::string name, std::optional<std::string> parent,
                     std::set<std::string> attributes) {
  if (types_.count(name) != 0) {
    throw ValidationError("schema", "duplicate entity type '" + name + "'");
  }
  EntityTypeDef def;
  def.name = name;
  def.parent = std::move(parent);
  def.own_attributes = std::move(attributes);
  types_.emplace(std::move(name), std::move(def));
}

void Schema::SetIntents(std::set<std::string> user, std::set<std::string> system) {
  user_intents_ = std::move(user);
  system_intents_ = std::move(system);
}

void Schema::Finalize() {
  for (auto& [name, def] : types_) {
    // Walk to the root; more steps than types means a cycle.
    std::set<std::string> attrs = def.own_attributes;
    int depth = 0;
    const EntityTypeDef* cur = &def;
    while (cur->parent) {
      auto it = types_.find(*cur->parent);
      if (it == types_.end()) {
        throw ValidationError("schema", "type '" + name + "' has unknown parent '" +
                                            *cur->parent + "'");
      }
      cur = &it->second;
      attrs.insert(cur->own_attributes.begin(), cur->own_attributes.end());
      if (++depth > static_cast<int>(types_.size())) {
        throw ValidationError("schema", "inheritance cycle through '" + name + "'");
      }
    }
    def.attributes = std::move(attrs);
    def.depth = depth;
  }
}

Schema Schema::FromJson(const Json& j) {
  Schema s;
  try {
    for (const Json& t : j.at("types")) {
      std::optional<std::string> parent;
      if (t.contains("parent") && !t.at("parent").is_null()) {
        parent = t.at("parent").get<std::string>();
      }
      std::set<std::string> attrs;
      if (t.contains("attributes")) attrs = t.at("attributes").get<std::set<std::string>>();
      s.AddType(t.at("name").get<std::string>(), std::move(parent), std::move(attrs));
    }
    if (j.contains("user_attributes")) {
      s.user_attributes_ = j.at("user_attributes").get<std::set<std::string>>();
    }
    s.user_intents_ = j.value("user_intents", std::set<std::string>{});
    s.system_intents_ = j.value("system_intents", std::set<std::string>{});
  } catch (const Json::exception& e) {
    throw ValidationError("schema", e.what());
  }
  s.Finalize();
  return s;
}

Json Schema::ToJson() const {
  Json types = Json::array();
  for (const auto& [name, def] : types_) {
    Json t = {{"name", name}, {"attributes", def.own_attributes}};
    t["parent"] = def.parent ? Json(*def.parent) : Json(nullptr);
    types.push_back(std::move(t));
  }
  return {{"types", types},
          {"user_attributes", user_attributes_},
          {"user_intents", user_intents_},
          {"system_intents", system_intents_}};
}

const EntityTypeDef* Schema::Find(std::string_view name) const {
  auto it = types_.find(name);
  return it == types_.end() ? nullptr : &it->second;
}

bool Schema::IsA(std::string_view type, std::string_view ancestor) const {
  const EntityTypeDef* cur = Find(type);
  while (cur != nullptr) {
    if (cur->name == ancestor) return true;
    cur = cur->parent ? Find(*cur->parent) : nullptr;
  }
  return false;
}

bool Schema::SlotLegal(std::string_view type, std::string_view slot) const {
  const EntityTypeDef* def = Find(type);
  return def != nullptr && def->attributes.count(std::string(slot)) != 0;
}

bool Schema::IsUserAttribute(std::string_view slot) const {
  return user_attributes_.count(std::string(slot)) != 0;
}

bool Schema::IsKnownSlot(std::string_view slot) const {
  if (IsUserAttribute(slot)) return true;
  for (const auto& [name, def] : types_) {
    if (def.own_attributes.count(std::string(slot)) != 0) return true;
  }
  return false;
}

bool Schema::IsIntent(std::string_view name) const {
  const std::string key(name);
  return user_intents_.count(key) != 0 || system_intents_.count(key) != 0;
}

std::vector<std::string> Schema::TypeNames() const {
  std::vector<std::string> out;
  for (const auto& [name, def] : types_) out.push_back(name);
  return out;
}

std::set<std::string> Schema::EntityAttributes() const {
  std::set<std::string> out;
  for (const auto& [name, def] : types_) {
    out.insert(def.own_attributes.begin(), def.own_attributes.end());
  }
  return out;
}

Schema ExampleSchema() {
  Schema s;
  s.AddType("实体", std::nullopt, {});
  s.AddType("业务", "实体", {"价格", "办理方式"});
  s.AddType("套餐", "业务", {"流量", "通话时长"});
  s.AddType("主套餐", "套餐", {"合约期"});
  s.AddType("流量包", "套餐", {"有效期"});
  s.AddType("营业厅", "实体", {"地址", "营业时间"});
  s.SetUserAttributes({"余额", "剩余流量", "积分"});
  s.SetIntents({"问候", "询问", "求助-查询", "客套", "肯定", "其他"},
               {"问候", "告知", "推荐", "抱歉", "请求-重复", "确认", "再见", "其他"});
  s.Finalize();
  return s;
}

}  // namespace mobilecs::corpus
