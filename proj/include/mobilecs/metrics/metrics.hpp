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

// Automatic metrics for extraction and dialogue evaluation. Every P/R/F1 is
// micro-averaged over the corpus.

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mobilecs/corpus/types.hpp"
#include "mobilecs/kb/kb.hpp"
#include "mobilecs/util/json_io.hpp"

namespace mobilecs::metrics {

using corpus::Span;

struct PRF {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;

  // P = correct/predicted (0 when nothing predicted), R = correct/gold (0
  // when no gold), F1 = 2PR/(P+R) or 0.
  static PRF FromCounts(double correct, double predicted, double gold);
  static PRF FromPR(double precision, double recall);
  Json ToJson() const;
};

// ---- span F1 ---------------------------------------------------------------

struct TypedSpan {
  std::string dialogue_id;
  Span span;
  std::string label;

  auto operator<=>(const TypedSpan&) const = default;
};

// Exact boundary and label match; duplicates count as a multiset.
PRF SpanF1(const std::vector<TypedSpan>& predicted, const std::vector<TypedSpan>& gold);

// ---- B-cubed ---------------------------------------------------------------

// Mention span -> cluster id, for one dialogue.
using Clustering = std::map<Span, std::string>;

class BCubed {
 public:
  // Mentions present on only one side count as singletons on the other.
  void Add(const Clustering& predicted, const Clustering& gold);
  // Averages over every mention added. No mentions -> (1,1,1) and empty().
  PRF Result() const;
  bool empty() const { return mentions_ == 0; }

 private:
  double precision_sum_ = 0.0;
  double recall_sum_ = 0.0;
  long mentions_ = 0;
};

PRF BCubedScore(const Clustering& predicted, const Clustering& gold);

// ---- entity matching and triple F1 -----------------------------------------

struct EntityTriples {
  std::string id;
  std::vector<std::pair<std::string, std::string>> slot_values;
};

struct MatchResult {
  // predicted index -> gold index, -1 when unmatched. Pairs with zero
  // agreement are never matched.
  std::vector<int> mapping;
  int matched_triples = 0;
};

// Multiset intersection size of (slot, value) pairs.
int Agreement(const EntityTriples& a, const EntityTriples& b);

// Maximum-agreement assignment. Among optimal assignments (over the square
// matrix padded with empty entities) the one whose predicted->gold index
// vector is lexicographically smallest is returned, then zero-agreement
// pairs are dropped.
MatchResult HungarianMatch(const std::vector<EntityTriples>& predicted,
                           const std::vector<EntityTriples>& gold);

// Maximum-weight perfect assignment on a square integer matrix, rows to
// columns; returns the column per row. Ties resolve to the lexicographically
// smallest column vector.
std::vector<int> MaxAssignment(const std::vector<std::vector<long>>& weight);

struct TripleCounts {
  long correct = 0;
  long predicted = 0;
  long gold = 0;

  TripleCounts& operator+=(const TripleCounts& o) {
    correct += o.correct;
    predicted += o.predicted;
    gold += o.gold;
    return *this;
  }
  PRF prf() const { return PRF::FromCounts(correct, predicted, gold); }
};

// One dialogue. Entities with id corpus::kUserProfileId are paired with each
// other directly and kept out of the assignment.
TripleCounts CountTriples(const std::vector<EntityTriples>& predicted,
                          const std::vector<EntityTriples>& gold);

// Groups a dialogue's triples by entity id (first-appearance order).
std::vector<EntityTriples> GroupTriples(const std::vector<corpus::TripleAnnotation>& triples);

// ---- intents ---------------------------------------------------------------

struct IntentScore {
  PRF prf;
  bool empty = false;  // no intents on either side; prf is (1,1,1)
};

// Per-turn set comparison by name, or by name plus arguments.
IntentScore IntentPRF(const std::vector<std::vector<corpus::Intent>>& predicted,
                      const std::vector<std::vector<corpus::Intent>>& gold,
                      bool compare_args = false);

// ---- generation ------------------------------------------------------------

inline constexpr const char* kBleuVariant =
    "corpus BLEU-4, character tokens (whitespace dropped), uniform weights, "
    "p_n=1/(c_n+1) when no n-gram matches, standard brevity penalty";

// Corpus-level BLEU on a 0..100 scale. Throws std::invalid_argument on an
// empty corpus or mismatched sizes.
double Bleu(const std::vector<std::string>& generated, const std::vector<std::string>& references);

struct SuccessCase {
  const kb::UserGoal* goal = nullptr;
  const kb::LocalKB* kb = nullptr;  // optional; values re-read from it when set
  std::vector<std::string> system_responses;
};

// Expected values for a goal: read from `kb` when it holds the target,
// otherwise the value recorded on the goal.
std::vector<std::string> RequestedValues(const kb::UserGoal& goal, const kb::LocalKB* kb);

// Every requested value (whitespace stripped) occurs in the concatenated,
// whitespace-stripped system responses.
bool DialogueSucceeds(const SuccessCase& c);
double SuccessRate(const std::vector<SuccessCase>& cases);

// ---- reports ---------------------------------------------------------------

struct IeScores {
  PRF ner;
  PRF ecr_bcubed;
  PRF sr;
  double esa_acc = 0.0;
  PRF sf;
};

struct TodScores {
  PRF user;
  PRF system;
  double bleu = 0.0;
  double success = 0.0;
};

struct ScoreReport {
  std::optional<IeScores> ie;
  std::optional<TodScores> tod;
  std::vector<std::string> notes;

  Json ToJson() const;
  // Plain-text tables, one per task present.
  std::string Table() const;
};

}  // namespace mobilecs::metrics
