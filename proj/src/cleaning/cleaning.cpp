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

#include "mobilecs/cleaning/cleaning.hpp"

#include <algorithm>
#include <map>

#include "mobilecs/util/utf8.hpp"

namespace mobilecs::cleaning {

using corpus::Speaker;
using corpus::Span;
using corpus::Turn;

namespace {

std::set<std::string> ReadSet(const Json& j) {
  std::set<std::string> out;
  for (const Json& x : j) out.insert(x.get<std::string>());
  return out;
}

// Text used for lexicon lookups: whitespace and surrounding punctuation removed.
std::u32string Normalize(const std::string& text) {
  static const std::u32string kPunct = U"，。！？、,.!?~～…";
  std::u32string s = utf8::Decode(utf8::StripSpaces(text));
  while (!s.empty() && kPunct.find(s.back()) != std::u32string::npos) s.pop_back();
  while (!s.empty() && kPunct.find(s.front()) != std::u32string::npos) s.erase(s.begin());
  return s;
}

bool InLexicon(const std::u32string& text, const std::set<std::string>& lexicon, int max_len) {
  if (text.empty() || static_cast<int>(text.size()) > max_len) return false;
  return lexicon.count(utf8::Encode(text)) > 0;
}

std::set<std::u32string> Bigrams(const std::u32string& s) {
  std::set<std::u32string> out;
  if (s.size() == 1) out.insert(s);
  for (std::size_t i = 0; i + 1 < s.size(); ++i) out.insert(s.substr(i, 2));
  return out;
}

}  // namespace

CleaningConfig CleaningConfig::FromJson(const Json& j) {
  CleaningConfig c;
  for (const auto& [key, value] : j.items()) {
    if (key == "repetition_lexicon") {
      c.repetition_lexicon = ReadSet(value);
    } else if (key == "repetition_threshold") {
      c.repetition_threshold = value.get<double>();
    } else if (key == "overlap_threshold") {
      c.overlap_threshold = value.get<double>();
    } else if (key == "ack_lexicon") {
      c.ack_lexicon = ReadSet(value);
    } else if (key == "ack_len") {
      c.ack_len = value.get<int>();
    } else if (key == "interjection_lexicon") {
      c.interjection_lexicon = ReadSet(value);
    } else if (key == "interjection_len") {
      c.interjection_len = value.get<int>();
    } else {
      throw std::invalid_argument("unknown cleaning option '" + key + "'");
    }
  }
  return c;
}

Json CleaningConfig::ToJson() const {
  return {{"repetition_lexicon", repetition_lexicon},
          {"repetition_threshold", repetition_threshold},
          {"overlap_threshold", overlap_threshold},
          {"ack_lexicon", ack_lexicon},
          {"ack_len", ack_len},
          {"interjection_lexicon", interjection_lexicon},
          {"interjection_len", interjection_len}};
}

CleaningStats& CleaningStats::operator+=(const CleaningStats& o) {
  dialogues += o.dialogues;
  turns_before += o.turns_before;
  turns_after += o.turns_after;
  repetitions += o.repetitions;
  confirmations += o.confirmations;
  interjections += o.interjections;
  dropped_mentions += o.dropped_mentions;
  dropped_triples += o.dropped_triples;
  dropped_intents += o.dropped_intents;
  return *this;
}

Json CleaningStats::ToJson() const {
  return {{"dialogues", dialogues},
          {"turns_before", turns_before},
          {"turns_after", turns_after},
          {"turns_removed", turns_removed()},
          {"percent_removed", 100.0 * removed_fraction()},
          {"repetitions", repetitions},
          {"confirmations", confirmations},
          {"interjections", interjections},
          {"dropped_mentions", dropped_mentions},
          {"dropped_triples", dropped_triples},
          {"dropped_intents", dropped_intents}};
}

double BigramDice(const std::string& a, const std::string& b) {
  const auto x = Bigrams(utf8::Decode(utf8::StripSpaces(a)));
  const auto y = Bigrams(utf8::Decode(utf8::StripSpaces(b)));
  if (x.empty() && y.empty()) return 0.0;
  std::size_t common = 0;
  for (const auto& g : x) common += y.count(g);
  return 2.0 * static_cast<double>(common) / static_cast<double>(x.size() + y.size());
}

RedundancyVerdict ClassifyRedundantTurn(const Dialogue& d, int i, const CleaningConfig& cfg) {
  RedundancyVerdict v;
  v.turn_index = i;
  const int n = static_cast<int>(d.turns.size());
  if (i < 1 || i >= n) return v;
  const Turn& cur = d.turns[i];
  const Turn& prev = d.turns[i - 1];

  if (i >= 2 && prev.speaker != cur.speaker && d.turns[i - 2].speaker == cur.speaker) {
    for (const std::string& phrase : cfg.repetition_lexicon) {
      if (prev.text.find(phrase) == std::string::npos) continue;
      const double dice = BigramDice(cur.text, d.turns[i - 2].text);
      if (dice > cfg.repetition_threshold) {
        v.redundancy = RedundancyCase::kRepetition;
        v.evidence = "turn " + std::to_string(i - 1) + " requests repetition ('" + phrase +
                     "'), dice(" + std::to_string(i) + "," + std::to_string(i - 2) +
                     ")=" + std::to_string(dice);
        return v;
      }
    }
  }

  if (prev.speaker != cur.speaker && InLexicon(Normalize(cur.text), cfg.ack_lexicon, cfg.ack_len)) {
    for (int j = i - 2; j >= 0; --j) {
      const double dice = BigramDice(prev.text, d.turns[j].text);
      if (dice >= cfg.overlap_threshold) {
        v.redundancy = RedundancyCase::kConfirmation;
        v.evidence = "turn " + std::to_string(i - 1) + " echoes turn " + std::to_string(j) +
                     " (dice=" + std::to_string(dice) + "), turn " + std::to_string(i) +
                     " acknowledges";
        return v;
      }
    }
  }

  if (cur.speaker == Speaker::kUser && i + 1 < n && prev.speaker == Speaker::kSystem &&
      d.turns[i + 1].speaker == Speaker::kSystem &&
      InLexicon(Normalize(cur.text), cfg.interjection_lexicon, cfg.interjection_len)) {
    v.redundancy = RedundancyCase::kInterjection;
    v.evidence = "user interjection between system turns " + std::to_string(i - 1) + " and " +
                 std::to_string(i + 1);
  }
  return v;
}

namespace {

std::string Describe(const Dialogue& d, const std::string& what, const Span& s) {
  return d.id + ": " + what + " at (" + std::to_string(s.turn) + "," + std::to_string(s.start) +
         "," + std::to_string(s.end) + ") would be orphaned";
}

void CountDropped(const Turn& t, CleaningStats& stats) {
  stats.dropped_mentions += static_cast<int>(t.mentions.size());
  stats.dropped_triples += static_cast<int>(t.triples.size());
  stats.dropped_intents += static_cast<int>(t.intents.size());
}

// Rebuilds `d` without the turns in `removed`. When `merge_into` >= 0 the turn
// `merge_from` is appended onto turn `merge_into` instead of being dropped.
Dialogue Rebuild(const Dialogue& d, const std::set<int>& removed, int merge_from, int merge_into,
                 CleaningStats& stats) {
  const int n = static_cast<int>(d.turns.size());
  std::map<int, int> index;
  int next = 0;
  for (int t = 0; t < n; ++t) {
    if (removed.count(t) == 0 && t != merge_from) index[t] = next++;
  }
  const int offset = merge_into >= 0 ? utf8::Length(d.turns[merge_into].text) : 0;

  auto remap = [&](Span s, const std::string& what) {
    if (s.turn == merge_from && merge_into >= 0) {
      return Span{index.at(merge_into), s.start + offset, s.end + offset};
    }
    auto it = index.find(s.turn);
    if (it == index.end()) throw OrphanedAnnotationError(Describe(d, what, s));
    return Span{it->second, s.start, s.end};
  };

  Dialogue out;
  out.id = d.id;
  for (int t = 0; t < n; ++t) {
    const Turn& src = d.turns[t];
    if (removed.count(t) > 0) {
      CountDropped(src, stats);
      continue;
    }
    if (t == merge_from) continue;
    Turn turn = src;
    turn.index = index.at(t);
    std::vector<const Turn*> parts = {&src};
    if (t == merge_into) {
      const Turn& tail = d.turns[merge_from];
      turn.text += tail.text;
      parts.push_back(&tail);
      for (const auto& intent : tail.intents) {
        if (std::find(turn.intents.begin(), turn.intents.end(), intent) == turn.intents.end()) {
          turn.intents.push_back(intent);
        }
      }
    }
    turn.mentions.clear();
    turn.triples.clear();
    for (const Turn* part : parts) {
      for (corpus::Mention m : part->mentions) {
        m.span = remap(m.span, "mention '" + m.surface + "'");
        turn.mentions.push_back(std::move(m));
      }
      for (corpus::TripleAnnotation x : part->triples) {
        x.value_span = remap(x.value_span, "triple (" + x.entity_id + ", " + x.slot + ")");
        turn.triples.push_back(std::move(x));
      }
    }
    out.turns.push_back(std::move(turn));
  }

  std::set<std::string> clusters;
  for (const Turn& t : out.turns) {
    for (const auto& m : t.mentions) clusters.insert(m.entity_id);
  }
  std::set<std::string> had;
  for (const Turn& t : d.turns) {
    for (const auto& m : t.mentions) had.insert(m.entity_id);
  }
  for (const Turn& t : out.turns) {
    for (const auto& x : t.triples) {
      if (!x.is_user_profile() && had.count(x.entity_id) && !clusters.count(x.entity_id)) {
        throw OrphanedAnnotationError(
            Describe(d, "triple (" + x.entity_id + ", " + x.slot + ") whose entity lost every mention",
                     x.value_span));
      }
    }
  }
  return out;
}

}  // namespace

CleanResult CleanDialogue(const Dialogue& d, const CleaningConfig& cfg) {
  CleanResult result{d, {}};
  result.stats.dialogues = 1;
  result.stats.turns_before = static_cast<int>(d.turns.size());
  bool changed = true;
  while (changed) {
    changed = false;
    Dialogue& cur = result.dialogue;
    for (int i = 1; i < static_cast<int>(cur.turns.size()); ++i) {
      const RedundancyVerdict v = ClassifyRedundantTurn(cur, i, cfg);
      if (v.redundancy == RedundancyCase::kNone) continue;
      if (v.redundancy == RedundancyCase::kInterjection) {
        cur = Rebuild(cur, {i}, i + 1, i - 1, result.stats);
        ++result.stats.interjections;
      } else {
        cur = Rebuild(cur, {i - 1, i}, -1, -1, result.stats);
        ++(v.redundancy == RedundancyCase::kRepetition ? result.stats.repetitions
                                                         : result.stats.confirmations);
      }
      changed = true;
      break;
    }
  }
  if (result.stats.turns_before == static_cast<int>(result.dialogue.turns.size())) {
    result.dialogue = d;  // untouched input is returned verbatim
  }
  result.stats.turns_after = static_cast<int>(result.dialogue.turns.size());
  return result;
}

}  // namespace mobilecs::cleaning
