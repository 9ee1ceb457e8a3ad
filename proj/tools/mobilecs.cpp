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

// Command-line front end: corpus ingestion and cleaning, local KBs, IE
// training and evaluation, TOD evaluation, the evaluation service and
// synthetic corpora.

#include <atomic>
#include <csignal>
#include <iostream>

#include "CLI11.hpp"
#include "httplib.h"
#include "mobilecs/cleaning/cleaning.hpp"
#include "mobilecs/corpus/corpus.hpp"
#include "mobilecs/corpus/synth.hpp"
#include "mobilecs/ie/pipeline.hpp"
#include "mobilecs/kb/kb.hpp"
#include "mobilecs/metrics/metrics.hpp"
#include "mobilecs/service/service.hpp"
#include "mobilecs/tod/tod.hpp"
#include "mobilecs/util/json_io.hpp"

namespace fs = std::filesystem;
using namespace mobilecs;

namespace {

// File-backed settings; flags given on the command line win.
struct Config {
  std::string schema;
  std::uint64_t seed = 7;
  Json cleaning = Json::object();
  Json ie = Json::object();
  Json tod = Json::object();
  Json service = Json::object();

  static Config Load(const std::string& path) {
    Config c;
    if (path.empty()) return c;
    const Json j = ReadJsonFile(path);
    for (const auto& [key, value] : j.items()) {
      if (key == "schema") {
        c.schema = value.get<std::string>();
        // Relative to the config file.
        if (fs::path(c.schema).is_relative()) c.schema = (fs::path(path).parent_path() / c.schema).string();
      } else if (key == "seed") {
        c.seed = value.get<std::uint64_t>();
      } else if (key == "cleaning") {
        c.cleaning = value;
      } else if (key == "ie") {
        c.ie = value;
      } else if (key == "tod") {
        c.tod = value;
      } else if (key == "service") {
        c.service = value;
      } else {
        throw std::invalid_argument("unknown config key '" + key + "' in " + path);
      }
    }
    return c;
  }
};

struct Globals {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  bool debug = false;
  std::string schema_path;

  std::optional<Config> loaded;

  const Config& config() {
    if (!loaded) loaded = Config::Load(config_path);
    return *loaded;
  }
  std::uint64_t Seed() { return seed.value_or(config().seed); }
  corpus::Schema Schema() {
    const std::string path = schema_path.empty() ? config().schema : schema_path;
    return path.empty() ? corpus::ExampleSchema() : corpus::LoadSchema(path);
  }
  void Diagnostics(const std::vector<std::string>& lines) const {
    if (!debug) {
      if (!lines.empty()) std::cerr << lines.size() << " diagnostics (--debug to list)\n";
      return;
    }
    for (const auto& l : lines) std::cerr << "  " << l << "\n";
  }
};

std::vector<corpus::Dialogue> Splits(const corpus::CorpusSplit& c, const std::vector<std::string>& names) {
  std::vector<corpus::Dialogue> out;
  for (const auto& n : names) {
    const auto& part = c.at(corpus::ParseSplitTag(n));
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

void Emit(const metrics::ScoreReport& report, const std::string& path) {
  std::cout << report.Table();
  if (!path.empty()) {
    WriteJsonFile(path, report.ToJson());
    std::cout << "report written to " << path << "\n";
  }
}

std::atomic<httplib::Server*> g_server{nullptr};

void StopServer(int) {
  if (auto* s = g_server.load()) s->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Customer-service dialogue toolkit: information extraction and task-oriented dialogue"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.config_path, "JSON config file")->check(CLI::ExistingFile);
  app.add_option("--seed", g.seed, "random seed (overrides the config)");
  app.add_flag("--debug", g.debug, "list diagnostics; debug fields in served responses");
  app.add_option("--schema", g.schema_path, "schema JSON (default: built-in example schema)")
      ->check(CLI::ExistingFile);

  // ---- ingest
  std::string corpus_dir, out_path;
  auto* ingest = app.add_subcommand("ingest", "validate a corpus, repair entity types, write it canonically");
  ingest->add_option("corpus", corpus_dir, "corpus directory")->required()->check(CLI::ExistingDirectory);
  ingest->add_option("--out", out_path, "output directory for the repaired corpus");
  ingest->callback([&] {
    const auto schema = g.Schema();
    corpus::CorpusSplit c = corpus::LoadCorpus(corpus_dir, schema);
    std::vector<std::string> diags;
    int retyped = 0, unrepairable = 0;
    for (auto tag : {corpus::SplitTag::kTrain, corpus::SplitTag::kDev, corpus::SplitTag::kTest}) {
      for (auto& d : c.at(tag)) {
        auto r = corpus::RepairEntityTypes(d, schema);
        for (const auto& diag : r.diagnostics) {
          (diag.unrepairable ? unrepairable : retyped)++;
          diags.push_back(d.id + ": " + diag.message);
        }
        d = std::move(r.dialogue);
      }
    }
    std::cout << "dialogues: train " << c.train.size() << ", dev " << c.dev.size() << ", test " << c.test.size()
              << "\nentities retyped: " << retyped << ", unrepairable: " << unrepairable << "\n";
    g.Diagnostics(diags);
    if (!out_path.empty()) {
      corpus::WriteCorpus(out_path, c);
      std::cout << "written to " << out_path << "\n";
    }
  });

  // ---- clean
  auto* clean = app.add_subcommand("clean", "remove redundant turns");
  clean->add_option("corpus", corpus_dir, "corpus directory")->required()->check(CLI::ExistingDirectory);
  clean->add_option("--out", out_path, "output directory for the cleaned corpus");
  clean->callback([&] {
    const auto schema = g.Schema();
    const auto cfg = cleaning::CleaningConfig::FromJson(g.config().cleaning);
    corpus::CorpusSplit c = corpus::LoadCorpus(corpus_dir, schema);
    cleaning::CleaningStats total;
    for (auto tag : {corpus::SplitTag::kTrain, corpus::SplitTag::kDev, corpus::SplitTag::kTest}) {
      for (auto& d : c.at(tag)) {
        auto r = cleaning::CleanDialogue(d, cfg);
        total += r.stats;
        d = std::move(r.dialogue);
      }
    }
    std::printf("dialogues %d, turns %d -> %d, removed %d (%.2f%%)\n", total.dialogues, total.turns_before,
                total.turns_after, total.turns_removed(), 100.0 * total.removed_fraction());
    std::printf("repetitions %d, confirmations %d, interjections %d\n", total.repetitions, total.confirmations,
                total.interjections);
    std::printf("dropped annotations: mentions %d, triples %d, intents %d\n", total.dropped_mentions,
                total.dropped_triples, total.dropped_intents);
    if (!out_path.empty()) {
      corpus::WriteCorpus(out_path, c);
      WriteJsonFile(fs::path(out_path) / "cleaning_stats.json", total.ToJson());
      std::cout << "written to " << out_path << "\n";
    }
  });

  // ---- build-kb
  auto* build_kb = app.add_subcommand("build-kb", "write one local KB (and user goal) per dialogue");
  build_kb->add_option("corpus", corpus_dir, "corpus directory")->required()->check(CLI::ExistingDirectory);
  build_kb->add_option("--out", out_path, "output directory")->required();
  build_kb->callback([&] {
    const auto schema = g.Schema();
    const corpus::CorpusSplit c = corpus::LoadCorpus(corpus_dir, schema);
    std::vector<std::string> diags;
    long n = 0;
    for (const auto& raw : Splits(c, {"train", "dev", "test"})) {
      const auto d = corpus::RepairEntityTypes(raw, schema).dialogue;
      std::vector<std::string> local;
      const kb::LocalKB kb = kb::BuildLocalKb(d, schema, &local);
      const kb::UserGoal goal = kb::BuildUserGoal(d, kb, schema, &local);
      WriteJsonFile(fs::path(out_path) / (d.id + ".kb.json"), kb.ToJson());
      WriteJsonFile(fs::path(out_path) / (d.id + ".goal.json"), goal.ToJson());
      for (const auto& l : local) diags.push_back(d.id + ": " + l);
      ++n;
    }
    std::cout << n << " local KBs written to " << out_path << "\n";
    g.Diagnostics(diags);
  });

  // ---- train-ie
  std::string model_path;
  auto* train_ie = app.add_subcommand("train-ie", "train the four extraction models on the train split");
  train_ie->add_option("corpus", corpus_dir, "corpus directory")->required()->check(CLI::ExistingDirectory);
  train_ie->add_option("--out", model_path, "checkpoint file")->required();
  train_ie->callback([&] {
    const auto schema = g.Schema();
    const corpus::CorpusSplit c = corpus::LoadCorpus(corpus_dir, schema);
    ie::IeTrainOptions options = ie::IeTrainOptions::FromJson(g.config().ie);
    if (g.seed) options.training.seed = *g.seed;
    const auto start = std::chrono::steady_clock::now();
    const ie::IeTrainResult r = ie::TrainIe(c.train, schema, options);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    for (const auto& [name, losses] : r.epoch_losses) {
      std::printf("%-12s first epoch loss %.4f, last %.4f\n", name.c_str(), losses.front(), losses.back());
    }
    std::printf("trained on %zu dialogues in %.1f s\n", c.train.size(), secs);
    g.Diagnostics(r.diagnostics);
    r.bundle.Save(model_path);
    std::cout << "checkpoint written to " << model_path << "\n";
  });

  // ---- eval-ie
  std::vector<std::string> splits = {"test"};
  std::string report_path;
  auto* eval_ie = app.add_subcommand("eval-ie", "score a checkpoint in golden and pipeline modes");
  eval_ie->add_option("corpus", corpus_dir, "corpus directory")->required()->check(CLI::ExistingDirectory);
  eval_ie->add_option("--model", model_path, "checkpoint file")->required()->check(CLI::ExistingFile);
  eval_ie->add_option("--split", splits, "splits to score")->check(CLI::IsMember({"train", "dev", "test"}));
  eval_ie->add_option("--report", report_path, "write the JSON report here");
  eval_ie->callback([&] {
    const auto schema = g.Schema();
    const corpus::CorpusSplit c = corpus::LoadCorpus(corpus_dir, schema);
    const ie::IeBundle bundle = ie::IeBundle::Load(model_path);
    const ie::IeEvaluation ev = ie::EvaluateIe(bundle.view(), Splits(c, splits), schema, bundle.options());
    metrics::ScoreReport golden{ev.golden, std::nullopt, {"mode: golden (gold prerequisites per stage)"}};
    metrics::ScoreReport pipeline{ev.pipeline, std::nullopt, {"mode: pipeline"}};
    std::cout << "== golden\n" << golden.Table() << "== pipeline\n" << pipeline.Table();
    g.Diagnostics(ev.diagnostics);
    if (!report_path.empty()) {
      WriteJsonFile(report_path, {{"golden", golden.ToJson()}, {"pipeline", pipeline.ToJson()}});
      std::cout << "report written to " << report_path << "\n";
    }
  });

  // ---- eval-tod
  std::string generator = "baseline", generator_url;
  auto* eval_tod = app.add_subcommand("eval-tod", "replay gold user turns against a generator");
  eval_tod->add_option("corpus", corpus_dir, "corpus directory")->required()->check(CLI::ExistingDirectory);
  eval_tod->add_option("--generator", generator, "oracle, baseline or external")
      ->check(CLI::IsMember({"oracle", "baseline", "external"}));
  eval_tod->add_option("--url", generator_url, "external generator endpoint");
  eval_tod->add_option("--split", splits, "splits to score")->check(CLI::IsMember({"train", "dev", "test"}));
  eval_tod->add_option("--report", report_path, "write the JSON report here");
  eval_tod->callback([&] {
    const auto schema = g.Schema();
    const corpus::CorpusSplit c = corpus::LoadCorpus(corpus_dir, schema);
    if (eval_tod->count("--generator") == 0) generator = g.config().tod.value("generator", generator);
    if (generator_url.empty()) generator_url = g.config().tod.value("url", "");
    tod::GeneratorFactory factory;
    if (generator == "oracle") {
      factory = [](const corpus::Dialogue&, const std::vector<tod::Exchange>& ex) {
        return std::make_unique<tod::OracleGenerator>(ex);
      };
    } else if (generator == "baseline") {
      auto base = std::make_shared<tod::BaselineGenerator>(tod::BaselineGenerator::Build(c.train, schema));
      factory = [base](const corpus::Dialogue&, const std::vector<tod::Exchange>&) {
        return std::make_unique<tod::BaselineGenerator>(*base);
      };
    } else {
      if (generator_url.empty()) throw CLI::ValidationError("--url", "required for the external generator");
      factory = [&](const corpus::Dialogue&, const std::vector<tod::Exchange>&) {
        return std::make_unique<tod::ExternalGenerator>(generator_url);
      };
    }
    const tod::TodEvaluation ev = tod::EvaluateTod(Splits(c, splits), schema, factory);
    metrics::ScoreReport report{std::nullopt, ev.scores, {"generator: " + generator}};
    report.notes.push_back("turns: " + std::to_string(ev.turns) +
                           ", kb inconsistencies: " + std::to_string(ev.kb_inconsistencies));
    Emit(report, report_path);
    g.Diagnostics(ev.log);
  });

  // ---- serve
  std::string host = "127.0.0.1", log_path;
  int port = 8080;
  auto* serve = app.add_subcommand("serve", "run the human-evaluation HTTP service");
  serve->add_option("corpus", corpus_dir, "corpus directory (goals sampled from test, baseline built from train)")
      ->required()
      ->check(CLI::ExistingDirectory);
  serve->add_option("--host", host, "bind address");
  serve->add_option("--port", port, "port");
  serve->add_option("--log", log_path, "append-only session log (JSON lines)");
  serve->add_option("--generator", generator, "baseline or external")->check(CLI::IsMember({"baseline", "external"}));
  serve->add_option("--url", generator_url, "external generator endpoint");
  serve->callback([&] {
    const auto schema = g.Schema();
    const corpus::CorpusSplit c = corpus::LoadCorpus(corpus_dir, schema);
    const Json& sc = g.config().service;
    if (serve->count("--host") == 0) host = sc.value("host", host);
    if (serve->count("--port") == 0) port = sc.value("port", port);
    if (log_path.empty()) log_path = sc.value("log", "");
    if (serve->count("--generator") == 0) generator = sc.value("generator", generator);
    if (generator_url.empty()) generator_url = sc.value("url", "");

    std::map<std::string, service::GeneratorMaker> models;
    if (generator == "baseline") {
      auto base = std::make_shared<tod::BaselineGenerator>(tod::BaselineGenerator::Build(c.train, schema));
      models["baseline"] = [base] { return std::make_unique<tod::BaselineGenerator>(*base); };
    } else {
      if (generator_url.empty()) throw CLI::ValidationError("--url", "required for the external generator");
      const std::string url = generator_url;
      models["external"] = [url] { return std::make_unique<tod::ExternalGenerator>(url); };
    }
    service::ServiceOptions options;
    options.seed = g.Seed();
    options.log_path = log_path;
    options.debug = g.debug;
    options.default_model = generator;
    service::EvalService svc(schema, service::BuildGoalSources(c.test, schema), models, options);
    httplib::Server server;
    service::RegisterRoutes(server, svc);
    g_server = &server;
    std::signal(SIGINT, StopServer);
    std::signal(SIGTERM, StopServer);
    std::cout << "serving on http://" << host << ":" << port << std::endl;
    if (!server.listen(host, port)) throw std::runtime_error("cannot listen on " + host + ":" + std::to_string(port));
    g_server = nullptr;
  });

  // ---- synth
  int n_dialogues = 100;
  double redundancy = 0.15;
  auto* synth = app.add_subcommand("synth", "write a synthetic annotated corpus");
  synth->add_option("--out", out_path, "output directory")->required();
  synth->add_option("--dialogues", n_dialogues, "number of dialogues")->check(CLI::PositiveNumber);
  synth->add_option("--redundancy", redundancy, "fraction of planted redundant turns")->check(CLI::Range(0.0, 0.5));
  synth->callback([&] {
    corpus::SynthConfig cfg;
    cfg.seed = g.Seed();
    cfg.n_dialogues = n_dialogues;
    cfg.redundancy_rate = redundancy;
    const corpus::CorpusSplit c = corpus::SynthesizeCorpus(cfg, g.Schema());
    corpus::WriteCorpus(out_path, c);
    std::cout << c.size() << " dialogues written to " << out_path << "\n";
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
