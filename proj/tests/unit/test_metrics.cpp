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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "doctest.h"
#include "mobilecs/metrics/metrics.hpp"
#include "support/metrics_oracle.hpp"

using namespace mobilecs;
using namespace mobilecs::metrics;
using testing::BruteForce;
using testing::RandomEntities;

namespace {

TypedSpan TS(int turn, int s, int e, std::string label) { return {"d", {turn, s, e}, std::move(label)}; }

Clustering RandomPartition(std::mt19937_64& rng, int mentions) {
  Clustering c;
  const int clusters = 1 + static_cast<int>(rng() % mentions);
  for (int m = 0; m < mentions; ++m) c[{0, m, m + 1}] = std::to_string(rng() % clusters);
  return c;
}

}  // namespace

TEST_CASE("span F1") {
  const std::vector<TypedSpan> gold = {TS(0, 0, 2, "套餐"), TS(1, 3, 5, "套餐")};
  auto r = SpanF1(gold, gold);
  CHECK(r.precision == 1.0);
  CHECK(r.f1 == 1.0);
  r = SpanF1({}, gold);
  CHECK(r.precision == 0.0);
  CHECK(r.recall == 0.0);
  CHECK(r.f1 == 0.0);
  r = SpanF1({TS(0, 0, 2, "套餐"), TS(1, 3, 5, "营业厅")}, gold);
  CHECK(r.precision == 0.5);
  CHECK(r.recall == 0.5);
  CHECK(r.f1 == 0.5);
}

TEST_CASE("B-cubed hand fixture") {
  const Span a{0, 0, 1}, b{0, 1, 2}, c{0, 2, 3};
  const PRF r = BCubedScore({{a, "p"}, {b, "p"}, {c, "p"}}, {{a, "x"}, {b, "x"}, {c, "y"}});
  CHECK(std::abs(r.precision - 5.0 / 9.0) < 1e-9);
  CHECK(std::abs(r.recall - 1.0) < 1e-9);
  CHECK(std::abs(r.f1 - 10.0 / 14.0) < 1e-9);
}

TEST_CASE("B-cubed closed forms and conventions") {
  Clustering one, singles;
  const int n = 5;
  for (int m = 0; m < n; ++m) {
    one[{0, m, m + 1}] = "g";
    singles[{0, m, m + 1}] = "s" + std::to_string(m);
  }
  const PRF r = BCubedScore(singles, one);
  CHECK(r.precision == doctest::Approx(1.0));
  CHECK(r.recall == doctest::Approx(1.0 / n));
  BCubed empty;
  CHECK(empty.empty());
  CHECK(empty.Result().f1 == 1.0);
  // Predicted-only mention is a singleton on the gold side.
  const PRF extra = BCubedScore({{{0, 0, 1}, "p"}, {{0, 5, 6}, "p"}}, {{{0, 0, 1}, "g"}});
  CHECK(extra.precision == doctest::Approx(0.5));
  CHECK(extra.recall == doctest::Approx(1.0));
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const Clustering x = RandomPartition(rng, 1 + static_cast<int>(rng() % 8));
    const PRF s = BCubedScore(x, x);
    CHECK(s.precision == 1.0);
    CHECK(s.recall == 1.0);
    CHECK(s.f1 == 1.0);
  }
}

TEST_CASE("hungarian matching small fixtures") {
  const EntityTriples p{"p", {{"价格", "38元"}, {"流量", "5G"}}};
  const EntityTriples g{"g", {{"价格", "38元"}, {"流量", "5G"}, {"合约期", "12个月"}}};
  MatchResult m = HungarianMatch({p}, {g});
  CHECK(m.matched_triples == 2);
  CHECK(m.mapping == std::vector<int>{0});
  m = HungarianMatch({{"p", {{"a", "1"}}}}, {{"g", {{"b", "2"}}}});
  CHECK(m.matched_triples == 0);
  CHECK(m.mapping == std::vector<int>{-1});
}

TEST_CASE("hungarian matching equals permutation brute force") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 500; ++trial) {
    const auto p = RandomEntities(rng, static_cast<int>(rng() % 7));
    const auto g = RandomEntities(rng, static_cast<int>(rng() % 7));
    const auto [best, mapping] = BruteForce(p, g);
    const MatchResult m = HungarianMatch(p, g);
    CHECK(m.matched_triples == best);
    CHECK(m.mapping == mapping);
    std::set<int> used;
    for (int j : m.mapping) {
      if (j >= 0) CHECK(used.insert(j).second);
    }
    // Relabelling entity ids changes nothing.
    auto relabeled = g;
    for (auto& e : relabeled) e.id = "other-" + e.id;
    CHECK(HungarianMatch(p, relabeled).matched_triples == best);
  }
}

TEST_CASE("triple F1 on matched fixtures") {
  const EntityTriples p1{"p1", {{"价格", "38元"}, {"流量", "5G"}}};
  const EntityTriples g1{"g1", {{"价格", "38元"}, {"流量", "5G"}, {"合约期", "12个月"}}};
  TripleCounts c = CountTriples({p1}, {g1});
  CHECK(c.correct == 2);
  CHECK(c.prf().precision == 1.0);
  CHECK(c.prf().recall == 2.0 / 3.0);
  CHECK(c.prf().f1 == doctest::Approx(0.8));

  // Crossed entities: assignment swaps, wrong-entity triple is not correct.
  const EntityTriples pa{"pa", {{"地址", "建设路1号"}, {"价格", "5元"}}};
  const EntityTriples pb{"pb", {{"价格", "38元"}}};
  const EntityTriples ga{"ga", {{"价格", "38元"}}};
  const EntityTriples gb{"gb", {{"地址", "建设路1号"}, {"价格", "8元"}}};
  c = CountTriples({pa, pb}, {ga, gb});
  CHECK(c.correct == 2);
  CHECK(c.predicted == 3);
  CHECK(c.gold == 3);
  CHECK(c.prf().f1 == doctest::Approx(2.0 / 3.0));

  c = CountTriples({{"p", {{"a", "1"}}}}, {{"g", {{"b", "2"}}}});
  CHECK(c.prf().f1 == 0.0);
  c = CountTriples({}, {g1});
  CHECK(c.prf().precision == 0.0);
  CHECK(c.prf().recall == 0.0);
  CHECK(CountTriples({g1}, {g1}).prf().f1 == 1.0);

  // User-profile triples are paired directly.
  const EntityTriples u{std::string(corpus::kUserProfileId), {{"余额", "20块"}}};
  c = CountTriples({u, pb}, {ga, u});
  CHECK(c.correct == 2);
}

TEST_CASE("triple F1 on random fixtures matches the brute-force count") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const auto p = RandomEntities(rng, static_cast<int>(rng() % 6));
    const auto g = RandomEntities(rng, static_cast<int>(rng() % 6));
    const long best = BruteForce(p, g).first;
    long np = 0, ng = 0;
    for (const auto& e : p) np += static_cast<long>(e.slot_values.size());
    for (const auto& e : g) ng += static_cast<long>(e.slot_values.size());
    const PRF r = CountTriples(p, g).prf();
    const double ep = np ? static_cast<double>(best) / np : 0.0;
    const double er = ng ? static_cast<double>(best) / ng : 0.0;
    CHECK(r.precision == ep);
    CHECK(r.recall == er);
    CHECK(r.f1 == (ep + er > 0 ? 2 * ep * er / (ep + er) : 0.0));
    CHECK(r.f1 <= std::max(r.precision, r.recall) + 1e-12);
  }
}

TEST_CASE("intent P/R/F1") {
  using corpus::Intent;
  const std::vector<std::vector<Intent>> gold = {{{"询问", {}}}, {{"告知", {}}}};
  IntentScore s = IntentPRF(gold, gold);
  CHECK(s.prf.f1 == 1.0);
  CHECK_FALSE(s.empty);
  const std::vector<std::vector<Intent>> sup = {{{"询问", {}}, {"问候", {}}}, {{"告知", {}}, {"推荐", {}}}};
  s = IntentPRF(sup, gold);
  CHECK(s.prf.precision == 0.5);
  CHECK(s.prf.recall == 1.0);
  s = IntentPRF({{}, {}}, {{}, {}});
  CHECK(s.empty);
  CHECK(s.prf.f1 == 1.0);
  const std::vector<std::vector<Intent>> args = {{{"询问", {"a", "价格", std::nullopt}}}, {{"告知", {}}}};
  CHECK(IntentPRF(args, gold).prf.f1 == 1.0);
  CHECK(IntentPRF(args, gold, true).prf.f1 == 0.5);
}

TEST_CASE("BLEU") {
  CHECK(Bleu({"您好很高兴为您服务", "再见"}, {"您好很高兴为您服务", "再见"}) == doctest::Approx(100.0));
  // Disjoint characters: every p_n falls back to 1/(c_n+1).
  CHECK(Bleu({"abcd"}, {"wxyz"}) ==
        doctest::Approx(100.0 * std::pow(1.0 / 5 * 1.0 / 4 * 1.0 / 3 * 1.0 / 2, 0.25)));
  const std::vector<std::string> left(50, "abcdefgh"), right(50, "stuvwxyz");
  CHECK(Bleu(left, right) < 0.5);
  // m = (5,3,1,0), c = (6,4,2,1), equal lengths.
  const double expected = 100.0 * std::pow(5.0 / 6 * 3.0 / 4 * 1.0 / 2 * 1.0 / 2, 0.25);
  CHECK(Bleu({"abcd", "xy"}, {"abce", "xy"}) == doctest::Approx(expected).epsilon(1e-12));
  // Short candidate: brevity penalty exp(1 - 4/2).
  const double bp = std::exp(1.0 - 4.0 / 2.0);
  CHECK(Bleu({"ab"}, {"abcd"}) == doctest::Approx(100.0 * bp * std::pow(1.0 * 1.0 * 1.0 * 1.0, 0.25)));
  CHECK_THROWS(Bleu({}, {}));
  CHECK_THROWS(Bleu({"a"}, {}));
}

TEST_CASE("success rate") {
  kb::UserGoal empty;
  CHECK(DialogueSucceeds({&empty, nullptr, {}}));
  kb::UserGoal g;
  g.requested.push_back({"e1", "38元套餐", "价格", "38元"});
  CHECK(DialogueSucceeds({&g, nullptr, {"每个月 38元"}}));
  CHECK_FALSE(DialogueSucceeds({&g, nullptr, {"每个月五十"}}));
  kb::LocalKB kb;
  kb.entities.push_back({"e1", "主套餐", "38元套餐", {{"价格", "40元"}}});
  CHECK_FALSE(DialogueSucceeds({&g, &kb, {"每个月38元"}}));
  CHECK(DialogueSucceeds({&g, &kb, {"每个月40元"}}));
  const std::vector<SuccessCase> cases = {{&g, nullptr, {"38元"}}, {&g, nullptr, {"没有"}}};
  CHECK(SuccessRate(cases) == 0.5);
}

TEST_CASE("report renders both tasks") {
  ScoreReport r;
  r.ie = IeScores{};
  r.tod = TodScores{};
  r.tod->bleu = 4.13;
  const std::string t = r.Table();
  CHECK(t.find("F1 (NER)") != std::string::npos);
  CHECK(t.find("Success") != std::string::npos);
  CHECK(r.ToJson()["task2"]["bleu"] == 4.13);
}
