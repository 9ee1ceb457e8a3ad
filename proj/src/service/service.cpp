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

#include "mobilecs/service/service.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "httplib.h"
#include "mobilecs/corpus/corpus.hpp"

namespace mobilecs::service {

namespace {

Json ErrorBody(const std::string& message) { return {{"error", message}}; }

double Mean(const std::vector<Rating>& rs, int Rating::*field) {
  if (rs.empty()) return 0.0;
  double s = 0.0;
  for (const Rating& r : rs) s += r.*field;
  return s / static_cast<double>(rs.size());
}

}  // namespace

void Rating::Validate() const {
  for (const auto& [name, v] : {std::pair{"fluency", fluency}, {"coherency", coherency}, {"success", success}}) {
    if (v < 1 || v > 5) throw ServiceError(400, std::string(name) + " must be in [1, 5], got " + std::to_string(v));
  }
}

Json Rating::ToJson() const {
  return {{"fluency", fluency}, {"coherency", coherency}, {"success", success}, {"comment", comment}};
}

Rating Rating::FromJson(const Json& j) {
  Rating r;
  try {
    r.fluency = j.at("fluency").get<int>();
    r.coherency = j.at("coherency").get<int>();
    r.success = j.at("success").get<int>();
    r.comment = j.value("comment", "");
  } catch (const Json::exception& e) {
    throw ServiceError(400, std::string("malformed rating: ") + e.what());
  }
  return r;
}

Json HumanReport::ToJson() const {
  Json below = Json::array();
  for (const auto& [tester, n] : dialogue_counts) {
    if (n < required_dialogues) below.push_back(tester);
  }
  return {{"ratings", ratings},     {"fluency", fluency},
          {"coherency", coherency}, {"success", success},
          {"dialogue_counts", dialogue_counts}, {"required_dialogues", required_dialogues},
          {"testers_below_required", below}};
}

std::string HumanReport::Table() const {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-10s %-10s %-10s %-8s\n%-10.2f %-10.2f %-10.2f %-8ld\n", "Fluency", "Coherency",
                "Success", "Ratings", fluency, coherency, success, ratings);
  return buf;
}

std::vector<GoalSource> BuildGoalSources(const std::vector<corpus::Dialogue>& dialogues,
                                         const corpus::Schema& schema) {
  std::vector<GoalSource> out;
  for (const auto& raw : dialogues) {
    const auto d = corpus::RepairEntityTypes(raw, schema).dialogue;
    GoalSource s{d.id, kb::BuildLocalKb(d, schema), {}};
    s.goal = kb::BuildUserGoal(d, s.kb, schema);
    out.push_back(std::move(s));
  }
  return out;
}

std::string RenderGoalCard(const kb::UserGoal& goal) {
  std::ostringstream out;
  if (goal.requested.empty()) {
    out << "请像平时一样向客服咨询业务";
    if (!goal.intents.empty()) {
      out << "，对话中可以有这些意图：";
      for (std::size_t i = 0; i < goal.intents.size(); ++i) out << (i ? "、" : "") << goal.intents[i];
    }
    out << "。";
    return out.str();
  }
  out << "请向客服问清楚以下信息：\n";
  for (std::size_t i = 0; i < goal.requested.size(); ++i) {
    const kb::GoalTarget& t = goal.requested[i];
    out << i + 1 << ". ";
    if (t.user_profile()) {
      out << "您账户的" << t.attribute;
    } else {
      out << t.entity_name << "的" << t.attribute;
    }
    out << "\n";
  }
  return out.str();
}

EvalService::EvalService(corpus::Schema schema, std::vector<GoalSource> sources,
                         std::map<std::string, GeneratorMaker> models, ServiceOptions options)
    : schema_(std::move(schema)),
      sources_(std::move(sources)),
      models_(std::move(models)),
      options_(std::move(options)),
      rng_(options_.seed) {
  if (options_.log_path.empty()) return;
  if (std::filesystem::exists(options_.log_path)) Replay(options_.log_path);
  if (options_.log_path.has_parent_path()) std::filesystem::create_directories(options_.log_path.parent_path());
  log_.open(options_.log_path, std::ios::app);
  if (!log_) throw std::runtime_error("cannot open session log " + options_.log_path.string());
}

std::size_t EvalService::SampleSource() { return static_cast<std::size_t>(rng_() % sources_.size()); }

std::unique_ptr<tod::Generator> EvalService::MakeGenerator(const std::string& model) const {
  const auto it = models_.find(model);
  if (it == models_.end() || !it->second) return nullptr;
  return it->second();
}

void EvalService::Append(const Json& event) {
  if (!log_.is_open()) return;
  log_ << event.dump() << '\n';
  log_.flush();
  if (!log_) throw ServiceError(500, "session log write failed");
}

EvalService::EvalSession& EvalService::Find(const std::string& id) {
  std::lock_guard lock(mu_);
  const auto it = sessions_.find(id);
  if (it == sessions_.end()) throw ServiceError(404, "unknown session " + id);
  return *it->second;
}

// Applies a logged event to the in-memory state. Callers hold mu_.
void EvalService::Apply(const Json& event, bool replaying) {
  const std::string kind = event.at("event").get<std::string>();
  const std::string id = event.at("session").get<std::string>();
  if (kind == "create") {
    auto s = std::make_unique<EvalSession>();
    s->id = id;
    s->tester = event.at("tester").get<std::string>();
    s->model = event.at("model").get<std::string>();
    s->source = event.at("source").get<std::size_t>();
    if (replaying) {
      // Keep the sampler in step with the original run.
      SampleSource();
      if (s->source >= sources_.size() || sources_[s->source].dialogue_id != event.at("dialogue").get<std::string>()) {
        throw std::runtime_error("session log does not match the loaded dialogues (session " + id + ")");
      }
      s->generator = MakeGenerator(s->model);
    }
    s->state.kb = sources_[s->source].kb;
    dialogue_counts_.try_emplace(s->tester, 0);
    const long n = std::stol(id.substr(1));
    next_id_ = std::max(next_id_, n + 1);
    sessions_[id] = std::move(s);
    return;
  }
  EvalSession& s = *sessions_.at(id);
  if (kind == "message") {
    const tod::TurnRecord r = tod::TurnRecord::FromJson(event.at("record"));
    if (r.predicted_entity &&
        std::find(s.state.history.begin(), s.state.history.end(), *r.predicted_entity) == s.state.history.end()) {
      s.state.history.push_back(*r.predicted_entity);
    }
    s.state.records.push_back(r);
  } else if (kind == "end") {
    s.ended = true;
    ++dialogue_counts_[s.tester];
  } else if (kind == "rating") {
    s.rating = Rating::FromJson(event.at("rating"));
    ratings_.push_back(*s.rating);
  } else {
    throw std::runtime_error("unknown session log event '" + kind + "'");
  }
}

void EvalService::Replay(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::string line;
  long n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    try {
      Apply(Json::parse(line), true);
    } catch (const std::exception& e) {
      throw std::runtime_error(path.string() + ":" + std::to_string(n) + ": " + e.what());
    }
  }
}

Json EvalService::CreateSession(const std::string& tester_id, const std::string& model) {
  if (tester_id.empty()) throw ServiceError(400, "tester_id is required");
  const std::string name = model.empty() ? options_.default_model : model;
  auto generator = MakeGenerator(name);
  if (!generator) throw ServiceError(503, "model '" + name + "' is not loaded");
  std::lock_guard lock(mu_);
  if (sources_.empty()) throw ServiceError(503, "no knowledge bases loaded");
  const std::string id = "s" + std::to_string(next_id_);
  const std::size_t source = SampleSource();
  const Json event = {{"event", "create"}, {"session", id},   {"tester", tester_id},
                      {"model", name},     {"source", source}, {"dialogue", sources_[source].dialogue_id}};
  Append(event);
  Apply(event, false);
  sessions_.at(id)->generator = std::move(generator);
  return {{"session_id", id},
          {"goal_card", RenderGoalCard(sources_[source].goal)},
          {"model", name},
          {"source_dialogue", sources_[source].dialogue_id},
          {"dialogue_count", dialogue_counts_[tester_id]}};
}

Json EvalService::PostMessage(const std::string& session_id, const std::string& text, bool debug) {
  EvalSession& s = Find(session_id);
  std::lock_guard session_lock(s.mu);
  if (s.ended) throw ServiceError(409, "session " + session_id + " has ended");
  if (!s.generator) throw ServiceError(503, "model '" + s.model + "' is not loaded");
  tod::TurnRecord r;
  try {
    r = tod::StepTurn(s.state, text, *s.generator, schema_);
  } catch (const tod::TodError& e) {
    throw ServiceError(500, e.what());
  }
  {
    std::lock_guard lock(mu_);
    Append({{"event", "message"}, {"session", session_id}, {"record", r.ToJson()}});
  }
  Json out = {{"response", r.response}};
  if (debug || options_.debug) {
    const Json full = r.ToJson();
    out["debug"] = {{"predicted_entity", full["predicted_entity"]},
                    {"user_intents", full["user_intents"]},
                    {"kb_status", std::string(kb::KBStatusName(r.kb_result.status))},
                    {"kb_values", r.kb_result.values},
                    {"system_intents", full["system_intents"]},
                    {"entity_name_history", r.entity_name_history}};
  }
  return out;
}

Json EvalService::EndSession(const std::string& session_id) {
  EvalSession& s = Find(session_id);
  std::lock_guard session_lock(s.mu);
  std::lock_guard lock(mu_);
  if (s.ended) throw ServiceError(409, "session " + session_id + " has already ended");
  const Json event = {{"event", "end"}, {"session", session_id}};
  Append(event);
  Apply(event, false);
  return {{"session_id", session_id}, {"ended", true}, {"dialogue_count", dialogue_counts_[s.tester]}};
}

HumanReport EvalService::SubmitRating(const std::string& session_id, const Rating& rating) {
  rating.Validate();
  EvalSession& s = Find(session_id);
  std::lock_guard session_lock(s.mu);
  {
    std::lock_guard lock(mu_);
    if (!s.ended) throw ServiceError(409, "session " + session_id + " must end before it is rated");
    if (s.rating) throw ServiceError(409, "session " + session_id + " is already rated");
    const Json event = {{"event", "rating"}, {"session", session_id}, {"rating", rating.ToJson()}};
    Append(event);
    Apply(event, false);
  }
  return Report();
}

HumanReport EvalService::Report() const {
  std::lock_guard lock(mu_);
  HumanReport r;
  r.ratings = static_cast<long>(ratings_.size());
  r.fluency = Mean(ratings_, &Rating::fluency);
  r.coherency = Mean(ratings_, &Rating::coherency);
  r.success = Mean(ratings_, &Rating::success);
  r.dialogue_counts = dialogue_counts_;
  return r;
}

// ---- HTTP --------------------------------------------------------------------

namespace {

template <typename F>
void Handle(httplib::Response& res, F body) {
  try {
    res.status = 200;
    res.set_content(body().dump(), "application/json");
  } catch (const ServiceError& e) {
    res.status = e.status();
    res.set_content(ErrorBody(e.what()).dump(), "application/json");
  } catch (const Json::exception& e) {
    res.status = 400;
    res.set_content(ErrorBody(std::string("malformed request: ") + e.what()).dump(), "application/json");
  } catch (const std::exception& e) {
    res.status = 500;
    res.set_content(ErrorBody(e.what()).dump(), "application/json");
  }
}

Json Body(const httplib::Request& req) { return req.body.empty() ? Json::object() : Json::parse(req.body); }

}  // namespace

void RegisterRoutes(httplib::Server& server, EvalService& service) {
  server.Post("/sessions", [&](const httplib::Request& req, httplib::Response& res) {
    Handle(res, [&] {
      const Json in = Body(req);
      Json out = service.CreateSession(in.value("tester_id", ""), in.value("model", ""));
      res.status = 201;
      return out;
    });
  });
  server.Post(R"(/sessions/([^/]+)/messages)", [&](const httplib::Request& req, httplib::Response& res) {
    Handle(res, [&] {
      const Json in = Body(req);
      return service.PostMessage(req.matches[1], in.at("text").get<std::string>(), in.value("debug", false));
    });
  });
  server.Post(R"(/sessions/([^/]+)/end)", [&](const httplib::Request& req, httplib::Response& res) {
    Handle(res, [&] { return service.EndSession(req.matches[1]); });
  });
  server.Post(R"(/sessions/([^/]+)/rating)", [&](const httplib::Request& req, httplib::Response& res) {
    Handle(res, [&] { return service.SubmitRating(req.matches[1], Rating::FromJson(Body(req))).ToJson(); });
  });
  server.Get("/report", [&](const httplib::Request&, httplib::Response& res) {
    Handle(res, [&] { return service.Report().ToJson(); });
  });
}

}  // namespace mobilecs::service
