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

#include <thread>

#include "doctest.h"
#include "httplib.h"
#include "mobilecs/corpus/synth.hpp"
#include "mobilecs/service/service.hpp"
#include "support/temp_dir.hpp"

using namespace mobilecs;
using namespace mobilecs::service;

namespace {

struct World {
  corpus::Schema schema = corpus::ExampleSchema();
  corpus::CorpusSplit split = corpus::SynthesizeCorpus(13, 40, schema);
  std::vector<GoalSource> sources = BuildGoalSources(split.test, schema);
  std::shared_ptr<tod::BaselineGenerator> base =
      std::make_shared<tod::BaselineGenerator>(tod::BaselineGenerator::Build(split.train, schema));

  std::map<std::string, GeneratorMaker> Models() const {
    auto b = base;
    return {{"baseline", [b] { return std::make_unique<tod::BaselineGenerator>(*b); }}};
  }
  std::unique_ptr<EvalService> Make(ServiceOptions options = {}) const {
    return std::make_unique<EvalService>(schema, sources, Models(), options);
  }
};

const World& TheWorld() {
  static const World w;
  return w;
}

int StatusOf(const std::function<void()>& f) {
  try {
    f();
  } catch (const ServiceError& e) {
    return e.status();
  }
  return 0;
}

Rating Scores(int f, int c, int s) { return Rating{f, c, s, ""}; }

}  // namespace

TEST_CASE("session creation") {
  const World& w = TheWorld();
  auto a = w.Make();
  const Json s1 = a->CreateSession("t1");
  const Json s2 = a->CreateSession("t1");
  CHECK(s1["session_id"] != s2["session_id"]);
  CHECK_FALSE(s1["goal_card"].get<std::string>().empty());
  CHECK(s1["dialogue_count"] == 0);

  auto b = w.Make();
  CHECK(b->CreateSession("t2")["source_dialogue"] == s1["source_dialogue"]);
  CHECK(b->CreateSession("t2")["source_dialogue"] == s2["source_dialogue"]);

  CHECK(StatusOf([&] { a->CreateSession("t1", "unknown-model"); }) == 503);
  CHECK(StatusOf([&] { a->CreateSession(""); }) == 400);
  EvalService empty(w.schema, {}, w.Models(), {});
  CHECK(StatusOf([&] { empty.CreateSession("t1"); }) == 503);
  EvalService no_model(w.schema, w.sources, {}, {});
  CHECK(StatusOf([&] { no_model.CreateSession("t1"); }) == 503);
}

TEST_CASE("goal cards") {
  kb::UserGoal g;
  CHECK(RenderGoalCard(g).find("咨询") != std::string::npos);
  g.requested.push_back({"e1", "38M套餐", "价格", "38元"});
  g.requested.push_back({"", "", "余额", "10元"});
  const std::string card = RenderGoalCard(g);
  CHECK(card.find("38M套餐的价格") != std::string::npos);
  CHECK(card.find("您账户的余额") != std::string::npos);
  // The card names what to ask, not the answer.
  CHECK(card.find("38元") == std::string::npos);
}

TEST_CASE("messages") {
  const World& w = TheWorld();
  auto svc = w.Make();
  const std::string id = svc->CreateSession("t1")["session_id"];
  const Json plain = svc->PostMessage(id, "你好");
  CHECK_FALSE(plain["response"].get<std::string>().empty());
  CHECK_FALSE(plain.contains("debug"));
  const Json dbg = svc->PostMessage(id, "38元套餐多少钱", true);
  REQUIRE(dbg.contains("debug"));
  CHECK(dbg["debug"].contains("kb_status"));
  CHECK(dbg["debug"].contains("user_intents"));
  CHECK(StatusOf([&] { svc->PostMessage("s999", "x"); }) == 404);
  svc->EndSession(id);
  CHECK(StatusOf([&] { svc->PostMessage(id, "x"); }) == 409);
  CHECK(StatusOf([&] { svc->EndSession(id); }) == 409);

  ServiceOptions o;
  o.debug = true;
  auto verbose = w.Make(o);
  const std::string v = verbose->CreateSession("t1")["session_id"];
  CHECK(verbose->PostMessage(v, "你好").contains("debug"));
}

TEST_CASE("ratings and the aggregate report") {
  const World& w = TheWorld();
  auto svc = w.Make();
  const std::string a = svc->CreateSession("t1")["session_id"];
  const std::string b = svc->CreateSession("t2")["session_id"];
  CHECK(StatusOf([&] { svc->SubmitRating(a, Scores(3, 3, 3)); }) == 409);
  svc->EndSession(a);
  CHECK(StatusOf([&] { svc->SubmitRating(a, Scores(0, 3, 3)); }) == 400);
  CHECK(StatusOf([&] { svc->SubmitRating(a, Scores(3, 6, 3)); }) == 400);
  CHECK(StatusOf([&] { svc->SubmitRating("s999", Scores(3, 3, 3)); }) == 404);

  HumanReport r = svc->SubmitRating(a, Scores(3, 3, 3));
  CHECK(r.ratings == 1);
  CHECK(r.fluency == 3.0);
  CHECK(r.coherency == 3.0);
  CHECK(r.success == 3.0);
  CHECK(StatusOf([&] { svc->SubmitRating(a, Scores(5, 5, 5)); }) == 409);

  auto two = w.Make();
  for (int score : {2, 4}) {
    const std::string id = two->CreateSession("t")["session_id"];
    two->EndSession(id);
    r = two->SubmitRating(id, Scores(score, score, score));
  }
  CHECK(r.fluency == 3.0);
  CHECK(r.coherency == 3.0);
  CHECK(r.success == 3.0);

  svc->EndSession(b);
  const HumanReport rep = svc->Report();
  CHECK(rep.dialogue_counts == std::map<std::string, int>{{"t1", 1}, {"t2", 1}});
  CHECK(rep.ToJson()["testers_below_required"].size() == 2);
  CHECK(rep.Table().find("Fluency") != std::string::npos);
}

TEST_CASE("rating validation") {
  CHECK_NOTHROW(Scores(1, 5, 3).Validate());
  CHECK_THROWS_AS(Scores(1, 5, 6).Validate(), ServiceError);
  CHECK_THROWS_AS(Rating::FromJson(Json{{"fluency", 3}}), ServiceError);
  CHECK(Rating::FromJson(Rating{1, 2, 3, "ok"}.ToJson()) == Rating{1, 2, 3, "ok"});
}

TEST_CASE("the session log replays into identical state") {
  const World& w = TheWorld();
  testing::TempDir dir;
  ServiceOptions o;
  o.log_path = dir.path() / "logs" / "sessions.jsonl";
  std::string open_id;
  HumanReport before;
  {
    auto svc = w.Make(o);
    for (int i = 0; i < 4; ++i) {
      const std::string id = svc->CreateSession(i % 2 ? "t1" : "t2")["session_id"];
      svc->PostMessage(id, "你好");
      svc->EndSession(id);
      svc->SubmitRating(id, Scores(1 + i, 5 - i, 2 + i % 3));
    }
    open_id = svc->CreateSession("t3")["session_id"].get<std::string>();
    svc->PostMessage(open_id, "38元套餐多少钱");
    before = svc->Report();
  }
  auto again = w.Make(o);
  CHECK(again->Report() == before);
  // Open sessions stay usable; ended ones stay closed.
  CHECK_FALSE(again->PostMessage(open_id, "还有别的吗", true)["debug"]["entity_name_history"].is_null());
  CHECK(StatusOf([&] { again->PostMessage("s1", "x"); }) == 409);
  CHECK(StatusOf([&] { again->SubmitRating("s1", Scores(3, 3, 3)); }) == 409);

  // Ids and sampling continue where the log left off.
  const Json next = again->CreateSession("t1");
  CHECK(next["session_id"] == "s6");
  auto fresh = w.Make();
  Json sixth;
  for (int i = 0; i < 6; ++i) sixth = fresh->CreateSession("t1");
  CHECK(next["source_dialogue"] == sixth["source_dialogue"]);

  // A log written against other dialogues is rejected.
  std::vector<GoalSource> reversed(w.sources.rbegin(), w.sources.rend());
  CHECK_THROWS_AS(EvalService(w.schema, reversed, w.Models(), o), std::runtime_error);
}

TEST_CASE("HTTP endpoints") {
  const World& w = TheWorld();
  auto svc = w.Make();
  httplib::Server server;
  RegisterRoutes(server, *svc);
  const int port = server.bind_to_any_port("127.0.0.1");
  std::thread th([&] { server.listen_after_bind(); });
  server.wait_until_ready();
  httplib::Client client("127.0.0.1", port);
  const auto post = [&](const std::string& path, const Json& body) {
    auto res = client.Post(path, body.dump(), "application/json");
    REQUIRE(res);
    return std::pair{res->status, Json::parse(res->body)};
  };

  auto [st, created] = post("/sessions", {{"tester_id", "t1"}});
  CHECK(st == 201);
  const std::string id = created["session_id"];
  CHECK(post("/sessions", {{"tester_id", "t1"}, {"model", "nope"}}).first == 503);

  auto [mst, msg] = post("/sessions/" + id + "/messages", {{"text", "38元套餐多少钱"}, {"debug", true}});
  CHECK(mst == 200);
  CHECK_FALSE(msg["response"].get<std::string>().empty());
  CHECK(msg["debug"].contains("kb_status"));
  CHECK(post("/sessions/s404/messages", {{"text", "x"}}).first == 404);
  CHECK(post("/sessions/" + id + "/messages", Json::object()).first == 400);

  CHECK(post("/sessions/" + id + "/rating", {{"fluency", 3}, {"coherency", 3}, {"success", 3}}).first == 409);
  CHECK(post("/sessions/" + id + "/end", Json::object()).first == 200);
  CHECK(post("/sessions/" + id + "/messages", {{"text", "x"}}).first == 409);
  CHECK(post("/sessions/" + id + "/rating", {{"fluency", 9}, {"coherency", 3}, {"success", 3}}).first == 400);
  auto [rst, report] = post("/sessions/" + id + "/rating", {{"fluency", 4}, {"coherency", 2}, {"success", 3}});
  CHECK(rst == 200);
  CHECK(report["fluency"] == 4.0);

  auto res = client.Get("/report");
  REQUIRE(res);
  CHECK(res->status == 200);
  const Json rep = Json::parse(res->body);
  CHECK(rep["ratings"] == 1);
  CHECK(rep["coherency"] == 2.0);
  CHECK(rep["dialogue_counts"]["t1"] == 1);
  CHECK(rep["required_dialogues"] == 10);

  server.stop();
  th.join();
}
