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

// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "mobilecs/cleaning/cleaning.hpp"
#include "mobilecs/corpus/corpus.hpp"
#include "mobilecs/corpus/synth.hpp"
#include "mobilecs/ie/crf.hpp"
#include "mobilecs/ie/pipeline.hpp"
#include "mobilecs/kb/kb.hpp"
#include "mobilecs/metrics/metrics.hpp"
#include "mobilecs/tod/tod.hpp"
#include "support/crf_oracle.hpp"
#include "support/fixtures.hpp"
#include "support/metrics_oracle.hpp"

using namespace mobilecs;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void Require(bool ok, const std::string& what) {
    if (!ok && pass) {
      pass = false;
      detail = what;
    }
  }
};

double Seconds(Clock::time_point since) { return std::chrono::duration<double>(Clock::now() - since).count(); }

std::string Fmt(const char* format, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, a, b, c);
  return buf;
}

// Shared between the extraction, dialogue and report criteria.
struct Runs {
  std::optional<metrics::IeScores> ie;
  std::optional<metrics::TodScores> tod;
};

// ---- CRF ---------------------------------------------------------------------

Outcome CrfCorrectness() {
  Outcome o;
  const auto start = Clock::now();
  std::mt19937_64 rng(101);
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const int T = 1 + static_cast<int>(rng() % 8);
    const bool bio = trial % 2 == 0;
    const int L = bio ? (trial % 4 == 0 ? 5 : 3) : 1 + static_cast<int>(rng() % 5);
    const auto mask = bio ? ie::TransitionMask::Bio(L) : ie::TransitionMask::None(L);
    const ie::Matrix e = testing::RandomMatrix(rng, T, L);
    const ie::Matrix tr = testing::RandomMatrix(rng, L, L);
    const auto oracle = testing::EnumeratePaths(e, tr, mask);
    const double err = std::abs(ie::LogPartition(e, tr, mask) - oracle.log_z);
    worst = std::max(worst, err);
    o.Require(err <= 1e-6, "log-partition off by " + Fmt("%.3g", err) + " on instance " + std::to_string(trial));
    o.Require(ie::ViterbiDecode(e, tr, mask) == oracle.argmax, "Viterbi differs on instance " + std::to_string(trial));
  }
  const double secs = Seconds(start);
  o.Require(secs < 10.0, "took " + Fmt("%.1f s", secs));
  if (o.pass) o.detail = Fmt("200 instances, max |logZ error| %.2g, %.2f s", worst, secs);
  return o;
}

Outcome CrfGradients() {
  Outcome o;
  std::mt19937_64 rng(102);
  const double eps = 1e-4;
  double worst = 0.0;
  auto rel = [](double a, double n) { return std::abs(a - n) / std::max({std::abs(a), std::abs(n), 1e-6}); };
  for (int trial = 0; trial < 20; ++trial) {
    const int T = 2 + static_cast<int>(rng() % 7);
    const auto mask = ie::TransitionMask::Bio(5);
    ie::Matrix e = testing::RandomMatrix(rng, T, 5);
    ie::Matrix tr = testing::RandomMatrix(rng, 5, 5);
    const auto gold = ie::SpansToBio(T, {{0, 1 + static_cast<int>(rng() % (T - 1)), static_cast<int>(rng() % 2)}});
    const ie::CrfLoss l = ie::CrfNll(e, tr, mask, gold);
    auto probe = [&](double& x, double analytic) {
      const double keep = x;
      x = keep + eps;
      const double up = ie::CrfNll(e, tr, mask, gold).loss;
      x = keep - eps;
      const double down = ie::CrfNll(e, tr, mask, gold).loss;
      x = keep;
      worst = std::max(worst, rel(analytic, (up - down) / (2 * eps)));
    };
    for (std::size_t k = 0; k < e.data.size(); ++k) probe(e.data[k], l.d_emissions.data[k]);
    for (int i = 0; i < 5; ++i) {
      for (int j = 0; j < 5; ++j) {
        if (mask.Allowed(i, j)) probe(tr.at(i, j), l.d_transitions.at(i, j));
      }
    }
  }
  o.Require(worst < 1e-4, "worst relative error " + Fmt("%.3g", worst));
  if (o.pass) o.detail = Fmt("20 instances, worst relative error %.2g", worst);
  return o;
}

// ---- metrics -----------------------------------------------------------------

Outcome HungarianAndTripleF1() {
  using metrics::EntityTriples;
  Outcome o;
  std::mt19937_64 rng(103);
  for (int trial = 0; trial < 500; ++trial) {
    const auto p = testing::RandomEntities(rng, static_cast<int>(rng() % 7));
    const auto g = testing::RandomEntities(rng, static_cast<int>(rng() % 7));
    const auto [best, mapping] = testing::BruteForce(p, g);
    const metrics::MatchResult m = metrics::HungarianMatch(p, g);
    o.Require(m.matched_triples == best && m.mapping == mapping, "assignment differs on trial " + std::to_string(trial));
    long np = 0, ng = 0;
    for (const auto& e : p) np += static_cast<long>(e.slot_values.size());
    for (const auto& e : g) ng += static_cast<long>(e.slot_values.size());
    const metrics::PRF r = metrics::CountTriples(p, g).prf();
    const double ep = np ? static_cast<double>(best) / np : 0.0;
    const double er = ng ? static_cast<double>(best) / ng : 0.0;
    const double ef = ep + er > 0 ? 2 * ep * er / (ep + er) : 0.0;
    o.Require(r.precision == ep && r.recall == er && r.f1 == ef, "triple P/R/F1 differs on trial " + std::to_string(trial));
  }
  // Hand-derived: 2 of 2 predicted correct, 2 of 3 gold found.
  const EntityTriples p1{"p1", {{"价格", "38元"}, {"流量", "5G"}}};
  const EntityTriples g1{"g1", {{"价格", "38元"}, {"流量", "5G"}, {"合约期", "12个月"}}};
  metrics::PRF r = metrics::CountTriples({p1}, {g1}).prf();
  o.Require(r.precision == 1.0 && r.recall == 2.0 / 3.0 && std::abs(r.f1 - 0.8) < 1e-12, "single-entity fixture");
  // Crossed entities: 2 correct of 3 predicted and 3 gold.
  const EntityTriples pa{"pa", {{"地址", "建设路1号"}, {"价格", "5元"}}};
  const EntityTriples pb{"pb", {{"价格", "38元"}}};
  const EntityTriples ga{"ga", {{"价格", "38元"}}};
  const EntityTriples gb{"gb", {{"地址", "建设路1号"}, {"价格", "8元"}}};
  r = metrics::CountTriples({pa, pb}, {ga, gb}).prf();
  o.Require(r.precision == 2.0 / 3.0 && r.recall == 2.0 / 3.0 && std::abs(r.f1 - 2.0 / 3.0) < 1e-12,
            "crossed-entity fixture");
  if (o.pass) o.detail = "500 random trials up to 6x6 and hand fixtures agree";
  return o;
}

Outcome BCubed() {
  using metrics::Clustering;
  Outcome o;
  const corpus::Span a{0, 0, 1}, b{0, 1, 2}, c{0, 2, 3};
  const metrics::PRF r = metrics::BCubedScore({{a, "p"}, {b, "p"}, {c, "p"}}, {{a, "x"}, {b, "x"}, {c, "y"}});
  o.Require(std::abs(r.precision - 5.0 / 9.0) < 1e-9 && std::abs(r.recall - 1.0) < 1e-9 &&
                std::abs(r.f1 - 10.0 / 14.0) < 1e-9,
            Fmt("fixture gave P=%.6f R=%.6f F1=%.6f", r.precision, r.recall, r.f1));
  std::mt19937_64 rng(104);
  for (int trial = 0; trial < 100; ++trial) {
    Clustering x;
    const int n = 1 + static_cast<int>(rng() % 12);
    const int k = 1 + static_cast<int>(rng() % n);
    for (int m = 0; m < n; ++m) x[{static_cast<int>(rng() % 3), m, m + 1}] = std::to_string(rng() % k);
    const metrics::PRF s = metrics::BCubedScore(x, x);
    o.Require(s.precision == 1.0 && s.recall == 1.0 && s.f1 == 1.0, "self score below 1 on partition " +
                                                                        std::to_string(trial));
  }
  if (o.pass) o.detail = "fixture P=5/9 R=1 F1=10/14; 100 random self-scores are (1,1,1)";
  return o;
}

// ---- cleaning ----------------------------------------------------------------

Outcome Cleaning() {
  using corpus::RedundancyCase;
  Outcome o;
  const cleaning::CleaningConfig cfg;

  const auto rep = testing::RepetitionFixture();
  o.Require(cleaning::ClassifyRedundantTurn(rep, 2, cfg).redundancy == RedundancyCase::kRepetition,
            "repetition fixture verdict");
  const auto rep_clean = cleaning::CleanDialogue(rep, cfg).dialogue;
  o.Require(rep_clean.turns.size() == 1 && rep_clean.turns[0].text == rep.turns[0].text,
            "repetition fixture should keep only the first user turn");

  const auto conf = testing::ConfirmationFixture();
  o.Require(cleaning::ClassifyRedundantTurn(conf, 2, cfg).redundancy == RedundancyCase::kConfirmation,
            "confirmation fixture verdict");
  const auto conf_clean = cleaning::CleanDialogue(conf, cfg).dialogue;
  o.Require(conf_clean.turns.size() == 1 && conf_clean.turns[0].text == conf.turns[0].text,
            "confirmation fixture should keep only the first user turn");

  const auto inter = testing::InterjectionFixture();
  o.Require(cleaning::ClassifyRedundantTurn(inter, 1, cfg).redundancy == RedundancyCase::kInterjection,
            "interjection fixture verdict");
  const auto inter_clean = cleaning::CleanDialogue(inter, cfg).dialogue;
  o.Require(inter_clean.turns.size() == 1 && inter_clean.turns[0].speaker == corpus::Speaker::kSystem &&
                inter_clean.turns[0].text == inter.turns[0].text + inter.turns[2].text,
            "interjection fixture should merge both system turns");

  const auto schema = corpus::ExampleSchema();
  corpus::SynthConfig sc;
  sc.seed = 105;
  sc.n_dialogues = 1000;
  sc.redundancy_rate = 0.15;
  const corpus::CorpusSplit c = corpus::SynthesizeCorpus(sc, schema);
  cleaning::CleaningStats total;
  for (const auto* part : {&c.train, &c.dev, &c.test}) {
    for (const auto& d : *part) total += cleaning::CleanDialogue(d, cfg).stats;
  }
  const double rate = total.removed_fraction();
  o.Require(std::abs(rate - 0.15) <= 0.02, Fmt("removal rate %.4f outside 0.15 +/- 0.02", rate));
  if (o.pass) {
    o.detail = "three fixtures ok; 1000 dialogues: " + std::to_string(total.turns_before) + " -> " +
               std::to_string(total.turns_after) + " turns, removal rate " + Fmt("%.4f", rate);
  }
  return o;
}

// ---- KB ----------------------------------------------------------------------

Outcome KbRoundTrip() {
  using kb::KBQuery;
  using kb::KBResult;
  using kb::KBStatus;
  using kb::QueryMode;
  Outcome o;
  const auto schema = corpus::ExampleSchema();
  const corpus::CorpusSplit c = corpus::SynthesizeCorpus(106, 200, schema);
  long checked = 0;
  for (const auto* part : {&c.train, &c.dev, &c.test}) {
    for (const auto& raw : *part) {
      const auto d = corpus::RepairEntityTypes(raw, schema).dialogue;
      const kb::LocalKB kb = kb::BuildLocalKb(d, schema);
      std::map<std::pair<std::string, std::string>, std::string> latest;
      for (const auto& t : d.turns) {
        for (const auto& x : t.triples) latest[{x.entity_id, x.slot}] = x.value;
      }
      for (const auto& [key, value] : latest) {
        KBQuery q;
        if (key.first == corpus::kUserProfileId) {
          q = {QueryMode::kUserAttribute, std::nullopt, key.second, std::nullopt};
        } else {
          const kb::KBEntity* e = kb.FindById(key.first);
          if (e == nullptr) {
            o.Require(false, d.id + ": entity " + key.first + " missing from the KB");
            continue;
          }
          q = {QueryMode::kAttributeOfEntity, e->name, key.second, std::nullopt};
        }
        o.Require(kb::KbQuery(kb, q, schema) == KBResult{KBStatus::kFound, {value}},
                  d.id + ": query for " + key.first + "/" + key.second + " did not return its value");
        ++checked;
      }
    }
  }
  // Every mode and status on the fixture.
  const kb::LocalKB kb = kb::BuildLocalKb(testing::PriceDialogue(), schema);
  const auto attr = [](std::string n, std::string s) {
    return KBQuery{QueryMode::kAttributeOfEntity, std::move(n), std::move(s), std::nullopt};
  };
  std::set<KBStatus> statuses;
  std::set<QueryMode> modes;
  const std::vector<std::pair<KBQuery, KBResult>> fixtures = {
      {attr("38M套餐", "价格"), {KBStatus::kFound, {"38元"}}},
      {attr("58M套餐", "价格"), {KBStatus::kNoEntity, {}}},
      {attr("38M套餐", "流量"), {KBStatus::kNoAttribute, {}}},
      {{QueryMode::kEntitiesOfType, std::nullopt, std::nullopt, "套餐"}, {KBStatus::kFound, {"38M套餐"}}},
      {{QueryMode::kEntitiesOfType, std::nullopt, std::nullopt, "营业厅"}, {KBStatus::kEmpty, {}}},
      {{QueryMode::kUserAttribute, std::nullopt, "余额", std::nullopt}, {KBStatus::kEmpty, {}}},
  };
  for (const auto& [q, expected] : fixtures) {
    o.Require(kb::KbQuery(kb, q, schema) == expected, "fixture query result differs");
    statuses.insert(expected.status);
    modes.insert(q.mode);
  }
  o.Require(statuses.size() == 4 && modes.size() == 3, "fixtures do not cover every mode and status");
  o.Require(kb::LocalKB::FromJson(kb.ToJson()) == kb, "KB JSON round trip");
  if (o.pass) o.detail = std::to_string(checked) + " triples queried back from 200 dialogues; 3 modes, 4 statuses";
  return o;
}

// ---- end to end --------------------------------------------------------------

Outcome InformationExtraction(Runs& runs) {
  Outcome o;
  const auto schema = corpus::ExampleSchema();
  const corpus::CorpusSplit c = corpus::SynthesizeCorpus(7, 200, schema);
  ie::IeTrainOptions options;
  options.training.seed = 7;
  const auto start = Clock::now();
  const ie::IeTrainResult trained = ie::TrainIe(c.train, schema, options);
  std::vector<corpus::Dialogue> held_out = c.dev;
  held_out.insert(held_out.end(), c.test.begin(), c.test.end());
  const ie::IeEvaluation ev = ie::EvaluateIe(trained.bundle.view(), held_out, schema, trained.bundle.options());
  const double secs = Seconds(start);
  runs.ie = ev.pipeline;
  const double golden = ev.golden.sf.f1, pipeline = ev.pipeline.sf.f1;
  o.Require(golden >= 0.95, Fmt("golden slot-filling F1 %.4f below 0.95", golden));
  o.Require(pipeline < golden, Fmt("pipeline F1 %.4f not below golden %.4f", pipeline, golden));
  o.Require(secs < 600.0, Fmt("took %.0f s", secs));
  if (o.pass) o.detail = Fmt("SF F1 golden %.4f, pipeline %.4f, %.0f s", golden, pipeline, secs);
  return o;
}

// Independent restatement of the per-turn query rule.
kb::KBResult ExpectedResult(const kb::LocalKB& kb, const std::vector<corpus::Intent>& intents,
                            const corpus::Schema& schema) {
  for (const auto& i : intents) {
    if (i.args.empty()) continue;
    const auto q = kb::QueryFromIntentArgs(i.args);
    return q ? kb::KbQuery(kb, *q, schema) : kb::KBResult{};
  }
  return {};
}

Outcome TaskOrientedDialogue(Runs& runs) {
  Outcome o;
  const auto schema = corpus::ExampleSchema();
  const corpus::CorpusSplit c = corpus::SynthesizeCorpus(108, 200, schema);
  const tod::TodEvaluation oracle =
      tod::EvaluateTod(c.test, schema, [](const corpus::Dialogue&, const std::vector<tod::Exchange>& ex) {
        return std::make_unique<tod::OracleGenerator>(ex);
      });
  o.Require(oracle.scores.success == 1.0, Fmt("oracle Success %.4f", oracle.scores.success));
  o.Require(std::abs(oracle.scores.bleu - 100.0) < 1e-9, Fmt("oracle BLEU %.4f", oracle.scores.bleu));

  const auto base = std::make_shared<tod::BaselineGenerator>(tod::BaselineGenerator::Build(c.train, schema));
  const tod::TodEvaluation ev =
      tod::EvaluateTod(c.test, schema, [&](const corpus::Dialogue&, const std::vector<tod::Exchange>&) {
        return std::make_unique<tod::BaselineGenerator>(*base);
      });
  runs.tod = ev.scores;
  o.Require(ev.scores.success > 0.0, "baseline Success is 0");
  long records = 0;
  for (std::size_t i = 0; i < c.test.size(); ++i) {
    const auto d = corpus::RepairEntityTypes(c.test[i], schema).dialogue;
    const kb::LocalKB kb = kb::BuildLocalKb(d, schema);
    for (const auto& r : ev.records[i]) {
      o.Require(r.kb_result == ExpectedResult(kb, r.user_intents, schema),
                d.id + ": a turn's KB result differs from the query");
      ++records;
    }
  }
  o.Require(ev.kb_inconsistencies == 0, "runtime counted KB inconsistencies");
  if (o.pass) {
    o.detail = Fmt("oracle Success %.3f BLEU %.2f; ", oracle.scores.success, oracle.scores.bleu) +
               Fmt("baseline Success %.3f BLEU %.2f, ", ev.scores.success, ev.scores.bleu) + std::to_string(records) +
               " turn records consistent";
  }
  return o;
}

Outcome Reports(const Runs& runs) {
  Outcome o;
  o.Require(runs.ie.has_value() && runs.tod.has_value(), "extraction or dialogue run missing");
  if (!o.pass) return o;
  metrics::ScoreReport report{runs.ie, runs.tod, {}};
  const std::string table = report.Table();
  const Json j = report.ToJson();
  o.Require(table.find("F1 (SF)") != std::string::npos && table.find("Success") != std::string::npos,
            "table lacks a task");
  o.Require(j.contains("task1") && j.contains("task2"), "JSON report lacks a task");
  std::printf("%s", table.c_str());
  if (o.pass) o.detail = "both task reports rendered from C++ targets only";
  return o;
}

}  // namespace

int main() {
  Runs runs;
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"crf-correctness", CrfCorrectness},
      {"crf-gradients", CrfGradients},
      {"hungarian-triple-f1", HungarianAndTripleF1},
      {"bcubed", BCubed},
      {"cleaning", Cleaning},
      {"kb-round-trip", KbRoundTrip},
      {"ie-end-to-end", [&] { return InformationExtraction(runs); }},
      {"tod-end-to-end", [&] { return TaskOrientedDialogue(runs); }},
      {"report-generation", [&] { return Reports(runs); }},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s %-20s %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu criteria, %d failed\n", criteria.size(), failed);
  return failed == 0 ? 0 : 1;
}
