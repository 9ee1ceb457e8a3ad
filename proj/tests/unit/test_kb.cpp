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

#include <map>

#include "doctest.h"
#include "mobilecs/corpus/corpus.hpp"
#include "mobilecs/corpus/synth.hpp"
#include "mobilecs/kb/kb.hpp"
#include "support/fixtures.hpp"

using namespace mobilecs;
using namespace mobilecs::kb;

namespace {

KBQuery Attr(std::string name, std::string slot) {
  return {QueryMode::kAttributeOfEntity, std::move(name), std::move(slot), std::nullopt};
}
KBQuery OfType(std::string type) {
  return {QueryMode::kEntitiesOfType, std::nullopt, std::nullopt, std::move(type)};
}
KBQuery User(std::string slot) {
  return {QueryMode::kUserAttribute, std::nullopt, std::move(slot), std::nullopt};
}

}  // namespace

TEST_CASE("empty dialogue builds an empty kb") {
  const LocalKB kb = BuildLocalKb(testing::DialogueBuilder("x").System("您好").Build(),
                                  corpus::ExampleSchema());
  CHECK(kb.entities.empty());
  CHECK(kb.user_profile.empty());
}

TEST_CASE("entity name is the most frequent surface, ties to the earliest") {
  const auto schema = corpus::ExampleSchema();
  const LocalKB kb = BuildLocalKb(testing::PriceDialogue(), schema);
  REQUIRE(kb.entities.size() == 1);
  CHECK(kb.entities[0].name == "38M套餐");
  CHECK(kb.entities[0].type == "主套餐");
  CHECK(kb.entities[0].attributes == std::map<std::string, std::string>{{"价格", "38元"}});

  const auto d = testing::DialogueBuilder("y")
                     .User("那个套餐和38M套餐还有那个套餐")
                     .Mention("那个套餐", "e1", "主套餐")
                     .Build();
  auto d2 = d;
  d2.turns[0].mentions.push_back({testing::SpanOf(0, d.turns[0].text, "38M套餐"), "38M套餐", "e1", "主套餐"});
  d2.turns[0].mentions.push_back({{0, 12, 16}, "那个套餐", "e1", "主套餐"});
  CHECK(BuildLocalKb(d2, schema).entities[0].name == "那个套餐");
}

TEST_CASE("later triple values overwrite earlier ones and are logged") {
  const auto d = testing::DialogueBuilder("c")
                     .User("38M套餐多少钱")
                     .Mention("38M套餐", "e1", "主套餐")
                     .System("38元")
                     .Triple("e1", "价格", "38元")
                     .System("不对是58元")
                     .Triple("e1", "价格", "58元")
                     .Build();
  std::vector<std::string> diag;
  const LocalKB kb = BuildLocalKb(d, corpus::ExampleSchema(), &diag);
  CHECK(kb.entities[0].attributes.at("价格") == "58元");
  REQUIRE(diag.size() == 1);
  CHECK(diag[0].find("conflict") != std::string::npos);
}

TEST_CASE("user-profile triples land in the profile") {
  const auto d = testing::DialogueBuilder("u").System("您的余额还有20块").Triple("@user", "余额", "20块").Build();
  const LocalKB kb = BuildLocalKb(d, corpus::ExampleSchema());
  CHECK(kb.user_profile.at("余额") == "20块");
}

TEST_CASE("kb_query modes and statuses") {
  const auto schema = corpus::ExampleSchema();
  const LocalKB kb = BuildLocalKb(testing::PriceDialogue(), schema);
  CHECK(KbQuery(kb, Attr("38M套餐", "价格"), schema) == KBResult{KBStatus::kFound, {"38元"}});
  CHECK(KbQuery(kb, Attr("38M", "价格"), schema) == KBResult{KBStatus::kFound, {"38元"}});
  CHECK(KbQuery(kb, Attr("我要的38M套餐", "价格"), schema).status == KBStatus::kFound);
  CHECK(KbQuery(kb, Attr("58M套餐", "价格"), schema).status == KBStatus::kNoEntity);
  CHECK(KbQuery(kb, Attr("38M套餐", "流量"), schema).status == KBStatus::kNoAttribute);
  CHECK(KbQuery(kb, OfType("套餐"), schema) == KBResult{KBStatus::kFound, {"38M套餐"}});
  CHECK(KbQuery(kb, OfType("实体"), schema).values.size() == kb.entities.size());
  CHECK(KbQuery(kb, OfType("营业厅"), schema) == KBResult{KBStatus::kEmpty, {}});
  CHECK(KbQuery(kb, User("余额"), schema) == KBResult{KBStatus::kEmpty, {}});
  CHECK_THROWS(KbQuery(kb, KBQuery{QueryMode::kAttributeOfEntity, "x", std::nullopt, std::nullopt}, schema));
}

TEST_CASE("ambiguous substring is no_entity") {
  const auto schema = corpus::ExampleSchema();
  LocalKB kb;
  kb.entities = {{"e1", "主套餐", "38元套餐", {{"价格", "38元"}}}, {"e2", "主套餐", "58元套餐", {}}};
  CHECK(KbQuery(kb, Attr("元套餐", "价格"), schema).status == KBStatus::kNoEntity);
  CHECK(KbQuery(kb, Attr("38", "价格"), schema).status == KBStatus::kFound);
}

TEST_CASE("intent args map to queries") {
  using corpus::IntentArgs;
  CHECK(QueryFromIntentArgs(IntentArgs{"a", "价格", std::nullopt})->mode == QueryMode::kAttributeOfEntity);
  CHECK(QueryFromIntentArgs(IntentArgs{std::nullopt, std::nullopt, "套餐"})->mode == QueryMode::kEntitiesOfType);
  CHECK(QueryFromIntentArgs(IntentArgs{std::nullopt, "余额", std::nullopt})->mode == QueryMode::kUserAttribute);
  CHECK_FALSE(QueryFromIntentArgs(IntentArgs{}).has_value());
  CHECK_FALSE(QueryFromIntentArgs(IntentArgs{"a", std::nullopt, std::nullopt}).has_value());
}

TEST_CASE("user goal") {
  const auto schema = corpus::ExampleSchema();
  const auto none = testing::DialogueBuilder("n").System("您好", {testing::Bare("问候")}).Build();
  const UserGoal empty = BuildUserGoal(none, BuildLocalKb(none, schema), schema);
  CHECK(empty.requested.empty());
  CHECK(empty.intents.empty());

  auto d = testing::PriceDialogue();
  d.turns[1].intents.push_back(testing::Ask("询问", "38M套餐", "流量"));
  const LocalKB kb = BuildLocalKb(d, schema);
  std::vector<std::string> diag;
  const UserGoal g = BuildUserGoal(d, kb, schema, &diag);
  REQUIRE(g.requested.size() == 1);
  CHECK(g.requested[0].expected_value == "38元");
  CHECK(g.requested[0].entity_id == "e1");
  CHECK(g.intents == std::vector<std::string>{"询问"});
  REQUIRE(diag.size() == 1);
  CHECK(diag[0].find("流量") != std::string::npos);
  CHECK(UserGoal::FromJson(g.ToJson()) == g);
}

TEST_CASE("kb json round trip") {
  const auto schema = corpus::ExampleSchema();
  const LocalKB kb = BuildLocalKb(testing::PriceDialogue(), schema);
  CHECK(LocalKB::FromJson(kb.ToJson()) == kb);
}

TEST_CASE("construction/query round trip on synthetic dialogues") {
  const auto schema = corpus::ExampleSchema();
  const auto c = corpus::SynthesizeCorpus(21, 200, schema);
  for (const auto& raw : c.train) {
    const auto d = corpus::RepairEntityTypes(raw, schema).dialogue;
    const LocalKB kb = BuildLocalKb(d, schema);
    std::map<std::pair<std::string, std::string>, std::string> latest;
    for (const auto& t : d.turns) {
      for (const auto& x : t.triples) latest[{x.entity_id, x.slot}] = x.value;
    }
    for (const auto& [key, value] : latest) {
      KBResult r;
      if (key.first == corpus::kUserProfileId) {
        r = KbQuery(kb, User(key.second), schema);
      } else {
        r = KbQuery(kb, Attr(kb.FindById(key.first)->name, key.second), schema);
      }
      CHECK(r == KBResult{KBStatus::kFound, {value}});
    }
    const UserGoal g = BuildUserGoal(d, kb, schema);
    for (const auto& target : g.requested) CHECK_FALSE(target.expected_value.empty());
  }
}
