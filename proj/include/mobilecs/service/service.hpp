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

// Human-evaluation session service: testers chat with a generator grounded in
// a sampled local KB, end the dialogue and rate it. State is persisted as an
// append-only JSON-lines log and rebuilt from it on start.

#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "mobilecs/corpus/schema.hpp"
#include "mobilecs/kb/kb.hpp"
#include "mobilecs/tod/tod.hpp"
#include "mobilecs/util/json_io.hpp"

namespace httplib {
class Server;
}

namespace mobilecs::service {

// Carries the HTTP status the error maps to.
class ServiceError : public std::runtime_error {
 public:
  ServiceError(int status, const std::string& what) : std::runtime_error(what), status_(status) {}
  int status() const { return status_; }

 private:
  int status_;
};

struct Rating {
  int fluency = 0;
  int coherency = 0;
  int success = 0;
  std::string comment;

  // Throws ServiceError(400) unless every score is in [1, 5].
  void Validate() const;
  Json ToJson() const;
  static Rating FromJson(const Json& j);
  bool operator==(const Rating&) const = default;
};

struct HumanReport {
  long ratings = 0;
  double fluency = 0.0;
  double coherency = 0.0;
  double success = 0.0;
  // Ended dialogues per tester.
  std::map<std::string, int> dialogue_counts;
  int required_dialogues = 10;

  Json ToJson() const;
  std::string Table() const;
  bool operator==(const HumanReport&) const = default;
};

// One dialogue's KB and goal, available for sampling.
struct GoalSource {
  std::string dialogue_id;
  kb::LocalKB kb;
  kb::UserGoal goal;
};

// Repairs entity types and builds one source per dialogue.
std::vector<GoalSource> BuildGoalSources(const std::vector<corpus::Dialogue>& dialogues,
                                         const corpus::Schema& schema);

// Natural-language description of what the tester should find out.
std::string RenderGoalCard(const kb::UserGoal& goal);

using GeneratorMaker = std::function<std::unique_ptr<tod::Generator>()>;

struct ServiceOptions {
  std::uint64_t seed = 7;
  std::filesystem::path log_path;  // empty: no persistence
  bool debug = false;              // debug fields on every message
  std::string default_model = "baseline";
};

class EvalService {
 public:
  // Replays `options.log_path` when it exists.
  EvalService(corpus::Schema schema, std::vector<GoalSource> sources, std::map<std::string, GeneratorMaker> models,
              ServiceOptions options);

  // {"session_id", "goal_card", "model", "source_dialogue", "dialogue_count"}.
  // Throws 503 when no KB or the requested model is unavailable, 400 on an
  // empty tester id.
  Json CreateSession(const std::string& tester_id, const std::string& model = "");
  // {"response"} plus "debug" fields when asked. Throws 404 for unknown
  // sessions, 409 once ended, 500 with the stage when generation fails.
  Json PostMessage(const std::string& session_id, const std::string& text, bool debug = false);
  Json EndSession(const std::string& session_id);
  // Accepted once per ended session; returns the aggregate report.
  HumanReport SubmitRating(const std::string& session_id, const Rating& rating);
  HumanReport Report() const;

 private:
  struct EvalSession {
    std::string id;
    std::string tester;
    std::string model;
    std::size_t source = 0;
    tod::Session state;
    std::unique_ptr<tod::Generator> generator;
    bool ended = false;
    std::optional<Rating> rating;
    std::mutex mu;
  };

  EvalSession& Find(const std::string& id);
  std::size_t SampleSource();
  std::unique_ptr<tod::Generator> MakeGenerator(const std::string& model) const;
  void Append(const Json& event);
  void Replay(const std::filesystem::path& path);
  void Apply(const Json& event, bool replaying);

  corpus::Schema schema_;
  std::vector<GoalSource> sources_;
  std::map<std::string, GeneratorMaker> models_;
  ServiceOptions options_;

  mutable std::mutex mu_;  // guards the maps, counters, rng and log
  std::mt19937_64 rng_;
  long next_id_ = 1;
  std::map<std::string, std::unique_ptr<EvalSession>> sessions_;
  std::vector<Rating> ratings_;
  std::map<std::string, int> dialogue_counts_;
  std::ofstream log_;
};

// Routes: POST /sessions, POST /sessions/{id}/messages, POST /sessions/{id}/end,
// POST /sessions/{id}/rating, GET /report.
void RegisterRoutes(httplib::Server& server, EvalService& service);

}  // namespace mobilecs::service
