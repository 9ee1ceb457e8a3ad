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

#include "doctest.h"
#include "mobilecs/cleaning/cleaning.hpp"
#include "mobilecs/corpus/corpus.hpp"
#include "mobilecs/corpus/synth.hpp"
#include "support/fixtures.hpp"

using namespace mobilecs;
using namespace mobilecs::cleaning;
using corpus::RedundancyCase;
using corpus::Speaker;

TEST_CASE("bigram dice") {
  CHECK(BigramDice("沈那中学里面", "沈那中学是吗") == doctest::Approx(0.6));
  CHECK(BigramDice("abc", "abc") == 1.0);
  CHECK(BigramDice("ab", "cd") == 0.0);
  CHECK(BigramDice("对", "对") == 1.0);
}

TEST_CASE("repetition fixture") {
  const auto d = testing::RepetitionFixture();
  const CleaningConfig cfg;
  const RedundancyVerdict v = ClassifyRedundantTurn(d, 2, cfg);
  CHECK(v.redundancy == RedundancyCase::kRepetition);
  CHECK_FALSE(v.evidence.empty());
  CHECK(ClassifyRedundantTurn(d, 1, cfg).redundancy == RedundancyCase::kNone);
  const CleanResult r = CleanDialogue(d, cfg);
  REQUIRE(r.dialogue.turns.size() == 1);
  CHECK(r.dialogue.turns[0].text == d.turns[0].text);
  CHECK(r.stats.repetitions == 1);
  CHECK(r.stats.turns_removed() == 2);
}

TEST_CASE("confirmation fixture") {
  const auto d = testing::ConfirmationFixture();
  const CleaningConfig cfg;
  CHECK(ClassifyRedundantTurn(d, 2, cfg).redundancy == RedundancyCase::kConfirmation);
  const CleanResult r = CleanDialogue(d, cfg);
  REQUIRE(r.dialogue.turns.size() == 1);
  CHECK(r.dialogue.turns[0].text == "沈那中学里面");
  CHECK(r.dialogue.turns[0].mentions == d.turns[0].mentions);
  CHECK(r.stats.confirmations == 1);
}

TEST_CASE("interjection fixture merges the system turns") {
  const auto d = testing::InterjectionFixture();
  const CleaningConfig cfg;
  CHECK(ClassifyRedundantTurn(d, 1, cfg).redundancy == RedundancyCase::kInterjection);
  const CleanResult r = CleanDialogue(d, cfg);
  REQUIRE(r.dialogue.turns.size() == 1);
  const auto& t = r.dialogue.turns[0];
  CHECK(t.speaker == Speaker::kSystem);
  CHECK(t.text == d.turns[0].text + d.turns[2].text);
  // Triple from the tail turn moved by the head's length.
  REQUIRE(t.triples.size() == 2);
  const int head_len = utf8::Length(d.turns[0].text);
  CHECK(t.triples[1].value_span.turn == 0);
  CHECK(t.triples[1].value_span.start == d.turns[2].triples[0].value_span.start + head_len);
  CHECK(utf8::Slice(t.text, t.triples[1].value_span.start, t.triples[1].value_span.end) ==
        t.triples[1].value);
  CHECK(t.intents.size() == 1);  // duplicated 告知 collapsed
  CHECK(r.stats.interjections == 1);
  CHECK(r.stats.dropped_intents == 1);
}

TEST_CASE("dialogue without redundancy is unchanged") {
  const auto d = testing::PriceDialogue();
  const CleanResult r = CleanDialogue(d, CleaningConfig{});
  CHECK(r.dialogue == d);
  CHECK(r.stats.turns_removed() == 0);
  CHECK(r.stats.repetitions + r.stats.confirmations + r.stats.interjections == 0);
}

TEST_CASE("removing a turn that a later span points into is an error") {
  auto d = testing::ConfirmationFixture();
  corpus::Turn extra;
  extra.index = 3;
  extra.speaker = Speaker::kSystem;
  extra.text = "好的";
  // Mention owned by turn 3 whose span points at the deleted echo turn.
  extra.mentions.push_back({{1, 0, 4}, "沈那中学", "e1", "营业厅"});
  d.turns.push_back(extra);
  CHECK_THROWS_AS(CleanDialogue(d, CleaningConfig{}), OrphanedAnnotationError);
}

TEST_CASE("config round trips through JSON and rejects unknown keys") {
  CleaningConfig c;
  c.ack_len = 3;
  c.interjection_lexicon = {"嗯"};
  const CleaningConfig back = CleaningConfig::FromJson(c.ToJson());
  CHECK(back.ack_len == 3);
  CHECK(back.interjection_lexicon == c.interjection_lexicon);
  CHECK(CleaningConfig::FromJson(Json{{"ack_len", 2}}).overlap_threshold == 0.6);
  CHECK_THROWS(CleaningConfig::FromJson(Json{{"ack_length", 2}}));
}

TEST_CASE("cleaning synthetic data removes exactly the planted turns") {
  const auto schema = corpus::ExampleSchema();
  const auto c = corpus::SynthesizeCorpus(11, 200, schema);
  CleaningStats total;
  int planted = 0;
  for (const auto& d : c.train) {
    for (const auto& t : d.turns) planted += t.planted != RedundancyCase::kNone;
    const CleanResult r = CleanDialogue(d, CleaningConfig{});
    total += r.stats;
    CHECK_NOTHROW(corpus::ValidateDialogue(r.dialogue, schema));
    for (const auto& t : r.dialogue.turns) CHECK(t.planted == RedundancyCase::kNone);
    CHECK(r.stats.dropped_triples == 0);
    const CleanResult again = CleanDialogue(r.dialogue, CleaningConfig{});
    CHECK(again.dialogue == r.dialogue);
  }
  CHECK(total.turns_removed() == planted);
}
