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

#include "mobilecs/metrics/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

#include "mobilecs/util/utf8.hpp"

namespace mobilecs::metrics {

PRF PRF::FromCounts(double correct, double predicted, double gold) {
  const double p = predicted > 0 ? correct / predicted : 0.0;
  const double r = gold > 0 ? correct / gold : 0.0;
  return FromPR(p, r);
}

PRF PRF::FromPR(double precision, double recall) {
  const double f = precision + recall > 0 ? 2 * precision * recall / (precision + recall) : 0.0;
  return {precision, recall, f};
}

Json PRF::ToJson() const { return {{"precision", precision}, {"recall", recall}, {"f1", f1}}; }

PRF SpanF1(const std::vector<TypedSpan>& predicted, const std::vector<TypedSpan>& gold) {
  std::map<TypedSpan, long> remaining;
  for (const TypedSpan& g : gold) ++remaining[g];
  long correct = 0;
  for (const TypedSpan& p : predicted) {
    auto it = remaining.find(p);
    if (it != remaining.end() && it->second > 0) {
      --it->second;
      ++correct;
    }
  }
  return PRF::FromCounts(correct, predicted.size(), gold.size());
}

// ---- B-cubed ---------------------------------------------------------------

void BCubed::Add(const Clustering& predicted, const Clustering& gold) {
  std::set<Span> mentions;
  for (const auto& [span, id] : predicted) mentions.insert(span);
  for (const auto& [span, id] : gold) mentions.insert(span);

  // Missing mentions get a private cluster id that cannot collide.
  auto cluster_of = [](const Clustering& c, const Span& s) {
    auto it = c.find(s);
    if (it != c.end()) return "c:" + it->second;
    return "s:" + std::to_string(s.turn) + ":" + std::to_string(s.start) + ":" + std::to_string(s.end);
  };
  std::map<Span, std::string> pc, gc;
  std::map<std::string, std::set<Span>> pm, gm;
  for (const Span& s : mentions) {
    pc[s] = cluster_of(predicted, s);
    gc[s] = cluster_of(gold, s);
    pm[pc[s]].insert(s);
    gm[gc[s]].insert(s);
  }
  for (const Span& s : mentions) {
    const auto& p = pm[pc[s]];
    const auto& g = gm[gc[s]];
    std::size_t common = 0;
    for (const Span& x : p) common += g.count(x);
    precision_sum_ += static_cast<double>(common) / static_cast<double>(p.size());
    recall_sum_ += static_cast<double>(common) / static_cast<double>(g.size());
    ++mentions_;
  }
}

PRF BCubed::Result() const {
  if (mentions_ == 0) return {1.0, 1.0, 1.0};
  return PRF::FromPR(precision_sum_ / mentions_, recall_sum_ / mentions_);
}

PRF BCubedScore(const Clustering& predicted, const Clustering& gold) {
  BCubed b;
  b.Add(predicted, gold);
  return b.Result();
}

// ---- matching --------------------------------------------------------------

int Agreement(const EntityTriples& a, const EntityTriples& b) {
  std::map<std::pair<std::string, std::string>, int> count;
  for (const auto& sv : b.slot_values) ++count[sv];
  int n = 0;
  for (const auto& sv : a.slot_values) {
    auto it = count.find(sv);
    if (it != count.end() && it->second > 0) {
      --it->second;
      ++n;
    }
  }
  return n;
}

namespace {

// Minimum-cost perfect assignment on rows x cols (rows <= cols) with
// potentials; returns the column of each row.
std::vector<int> MinCostAssignment(const std::vector<std::vector<long>>& cost) {
  const int n = static_cast<int>(cost.size());
  if (n == 0) return {};
  const int m = static_cast<int>(cost[0].size());
  const long inf = std::numeric_limits<long>::max() / 4;
  std::vector<long> u(n + 1, 0), v(m + 1, 0);
  std::vector<int> p(m + 1, 0), way(m + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<long> minv(m + 1, inf);
    std::vector<char> used(m + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      long delta = inf;
      int j1 = 0;
      for (int j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const long cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> row(n, -1);
  for (int j = 1; j <= m; ++j) {
    if (p[j] != 0) row[p[j] - 1] = j - 1;
  }
  return row;
}

long OptimalValue(const std::vector<std::vector<long>>& w, const std::vector<int>& rows,
                  const std::vector<int>& cols) {
  if (rows.empty()) return 0;
  std::vector<std::vector<long>> cost(rows.size(), std::vector<long>(cols.size()));
  for (std::size_t a = 0; a < rows.size(); ++a) {
    for (std::size_t b = 0; b < cols.size(); ++b) cost[a][b] = -w[rows[a]][cols[b]];
  }
  const std::vector<int> assign = MinCostAssignment(cost);
  long total = 0;
  for (std::size_t a = 0; a < rows.size(); ++a) total += w[rows[a]][cols[assign[a]]];
  return total;
}

}  // namespace

std::vector<int> MaxAssignment(const std::vector<std::vector<long>>& weight) {
  const int n = static_cast<int>(weight.size());
  std::vector<int> rows(n), cols(n);
  for (int i = 0; i < n; ++i) rows[i] = cols[i] = i;
  const long best = OptimalValue(weight, rows, cols);

  // Fix rows in order to the smallest column that still admits an optimum.
  std::vector<int> result(n, -1);
  long fixed = 0;
  std::vector<int> free_cols = cols;
  for (int i = 0; i < n; ++i) {
    const std::vector<int> rest_rows(rows.begin() + i + 1, rows.end());
    for (std::size_t k = 0; k < free_cols.size(); ++k) {
      std::vector<int> rest_cols = free_cols;
      rest_cols.erase(rest_cols.begin() + k);
      const long value = fixed + weight[i][free_cols[k]] + OptimalValue(weight, rest_rows, rest_cols);
      if (value == best) {
        result[i] = free_cols[k];
        fixed += weight[i][free_cols[k]];
        free_cols = std::move(rest_cols);
        break;
      }
    }
  }
  return result;
}

MatchResult HungarianMatch(const std::vector<EntityTriples>& predicted,
                           const std::vector<EntityTriples>& gold) {
  const std::size_t n = std::max(predicted.size(), gold.size());
  std::vector<std::vector<long>> w(n, std::vector<long>(n, 0));
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    for (std::size_t j = 0; j < gold.size(); ++j) w[i][j] = Agreement(predicted[i], gold[j]);
  }
  const std::vector<int> assign = MaxAssignment(w);
  MatchResult r;
  r.mapping.assign(predicted.size(), -1);
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    const int j = assign[i];
    if (j < static_cast<int>(gold.size()) && w[i][j] > 0) {
      r.mapping[i] = j;
      r.matched_triples += static_cast<int>(w[i][j]);
    }
  }
  return r;
}

TripleCounts CountTriples(const std::vector<EntityTriples>& predicted,
                          const std::vector<EntityTriples>& gold) {
  TripleCounts c;
  std::vector<EntityTriples> pe, ge;
  EntityTriples pu{std::string(corpus::kUserProfileId), {}}, gu = pu;
  for (const EntityTriples& e : predicted) {
    c.predicted += static_cast<long>(e.slot_values.size());
    if (e.id == corpus::kUserProfileId) {
      pu.slot_values.insert(pu.slot_values.end(), e.slot_values.begin(), e.slot_values.end());
    } else {
      pe.push_back(e);
    }
  }
  for (const EntityTriples& e : gold) {
    c.gold += static_cast<long>(e.slot_values.size());
    if (e.id == corpus::kUserProfileId) {
      gu.slot_values.insert(gu.slot_values.end(), e.slot_values.begin(), e.slot_values.end());
    } else {
      ge.push_back(e);
    }
  }
  c.correct = Agreement(pu, gu) + HungarianMatch(pe, ge).matched_triples;
  return c;
}

std::vector<EntityTriples> GroupTriples(const std::vector<corpus::TripleAnnotation>& triples) {
  std::vector<EntityTriples> out;
  std::map<std::string, std::size_t> index;
  for (const auto& x : triples) {
    auto [it, fresh] = index.try_emplace(x.entity_id, out.size());
    if (fresh) out.push_back({x.entity_id, {}});
    out[it->second].slot_values.emplace_back(x.slot, x.value);
  }
  return out;
}

// ---- intents ---------------------------------------------------------------

IntentScore IntentPRF(const std::vector<std::vector<corpus::Intent>>& predicted,
                      const std::vector<std::vector<corpus::Intent>>& gold, bool compare_args) {
  if (predicted.size() != gold.size()) {
    throw std::invalid_argument("intent comparison needs one entry per turn on both sides");
  }
  auto key = [&](const corpus::Intent& i) {
    std::string k = i.name;
    if (compare_args) {
      k += "|" + i.args.entity_name.value_or("") + "|" + i.args.attribute.value_or("") + "|" +
           i.args.entity_type.value_or("");
    }
    return k;
  };
  long correct = 0, np = 0, ng = 0;
  for (std::size_t t = 0; t < gold.size(); ++t) {
    std::set<std::string> p, g;
    for (const auto& i : predicted[t]) p.insert(key(i));
    for (const auto& i : gold[t]) g.insert(key(i));
    np += static_cast<long>(p.size());
    ng += static_cast<long>(g.size());
    for (const auto& k : p) correct += g.count(k);
  }
  if (np == 0 && ng == 0) return {{1.0, 1.0, 1.0}, true};
  return {PRF::FromCounts(correct, np, ng), false};
}

// ---- BLEU ------------------------------------------------------------------

namespace {

std::u32string CharTokens(const std::string& s) { return utf8::Decode(utf8::StripSpaces(s)); }

}  // namespace

double Bleu(const std::vector<std::string>& generated, const std::vector<std::string>& references) {
  if (generated.empty()) throw std::invalid_argument("BLEU over an empty corpus");
  if (generated.size() != references.size()) {
    throw std::invalid_argument("BLEU needs one reference per generated response");
  }
  constexpr int kMaxN = 4;
  long matched[kMaxN] = {0, 0, 0, 0};
  long total[kMaxN] = {0, 0, 0, 0};
  long cand_len = 0, ref_len = 0;
  for (std::size_t k = 0; k < generated.size(); ++k) {
    const std::u32string c = CharTokens(generated[k]);
    const std::u32string r = CharTokens(references[k]);
    cand_len += static_cast<long>(c.size());
    ref_len += static_cast<long>(r.size());
    for (int n = 1; n <= kMaxN; ++n) {
      std::map<std::u32string, long> ref_counts;
      for (std::size_t i = 0; i + n <= r.size(); ++i) ++ref_counts[r.substr(i, n)];
      std::map<std::u32string, long> cand_counts;
      for (std::size_t i = 0; i + n <= c.size(); ++i) ++cand_counts[c.substr(i, n)];
      for (const auto& [gram, count] : cand_counts) {
        auto it = ref_counts.find(gram);
        matched[n - 1] += std::min(count, it == ref_counts.end() ? 0L : it->second);
        total[n - 1] += count;
      }
    }
  }
  if (cand_len == 0) return 0.0;
  double log_sum = 0.0;
  for (int n = 0; n < kMaxN; ++n) {
    const double p = matched[n] > 0 ? static_cast<double>(matched[n]) / total[n]
                                    : 1.0 / static_cast<double>(total[n] + 1);
    log_sum += std::log(p) / kMaxN;
  }
  const double bp = cand_len > ref_len ? 1.0 : std::exp(1.0 - static_cast<double>(ref_len) / cand_len);
  return 100.0 * bp * std::exp(log_sum);
}

// ---- success ---------------------------------------------------------------

std::vector<std::string> RequestedValues(const kb::UserGoal& goal, const kb::LocalKB* kb) {
  std::vector<std::string> values;
  for (const kb::GoalTarget& t : goal.requested) {
    std::string v = t.expected_value;
    if (kb != nullptr) {
      const std::map<std::string, std::string>* attrs = nullptr;
      if (t.user_profile()) {
        attrs = &kb->user_profile;
      } else if (const kb::KBEntity* e = kb->FindById(t.entity_id)) {
        attrs = &e->attributes;
      }
      if (attrs != nullptr) {
        auto it = attrs->find(t.attribute);
        if (it != attrs->end()) v = it->second;
      }
    }
    values.push_back(std::move(v));
  }
  return values;
}

bool DialogueSucceeds(const SuccessCase& c) {
  if (c.goal == nullptr) throw std::invalid_argument("success case without a goal");
  std::string all;
  for (const std::string& r : c.system_responses) all += utf8::StripSpaces(r);
  for (const std::string& v : RequestedValues(*c.goal, c.kb)) {
    if (all.find(utf8::StripSpaces(v)) == std::string::npos) return false;
  }
  return true;
}

double SuccessRate(const std::vector<SuccessCase>& cases) {
  if (cases.empty()) return 0.0;
  long ok = 0;
  for (const SuccessCase& c : cases) ok += DialogueSucceeds(c);
  return static_cast<double>(ok) / static_cast<double>(cases.size());
}

// ---- reports ---------------------------------------------------------------

Json ScoreReport::ToJson() const {
  Json j = Json::object();
  if (ie) {
    j["task1"] = {{"ner_f1", ie->ner.f1},
                  {"ner", ie->ner.ToJson()},
                  {"ecr_bcubed", ie->ecr_bcubed.f1},
                  {"ecr", ie->ecr_bcubed.ToJson()},
                  {"sr_f1", ie->sr.f1},
                  {"sr", ie->sr.ToJson()},
                  {"esa_acc", ie->esa_acc},
                  {"sf_f1", ie->sf.f1},
                  {"sf", ie->sf.ToJson()}};
  }
  if (tod) {
    j["task2"] = {{"user", tod->user.ToJson()},
                  {"system", tod->system.ToJson()},
                  {"bleu", tod->bleu},
                  {"bleu_variant", kBleuVariant},
                  {"success", tod->success}};
  }
  j["notes"] = notes;
  return j;
}

namespace {

std::string Fmt(double x, int digits) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, x);
  return buf;
}

}  // namespace

std::string ScoreReport::Table() const {
  std::ostringstream out;
  if (ie) {
    out << "| F1 (NER) | B3 (ECR) | F1 (SR) | Acc (ESA) | F1 (SF) |\n"
        << "|---------:|---------:|--------:|----------:|--------:|\n"
        << "| " << Fmt(100 * ie->ner.f1, 2) << " | " << Fmt(100 * ie->ecr_bcubed.f1, 2) << " | "
        << Fmt(100 * ie->sr.f1, 2) << " | " << Fmt(100 * ie->esa_acc, 2) << " | "
        << Fmt(100 * ie->sf.f1, 2) << " |\n";
  }
  if (tod) {
    if (ie) out << "\n";
    out << "| U-P | U-R | U-F1 | S-P | S-R | S-F1 | BLEU | Success |\n"
        << "|----:|----:|-----:|----:|----:|-----:|-----:|--------:|\n"
        << "| " << Fmt(tod->user.precision, 3) << " | " << Fmt(tod->user.recall, 3) << " | "
        << Fmt(tod->user.f1, 3) << " | " << Fmt(tod->system.precision, 3) << " | "
        << Fmt(tod->system.recall, 3) << " | " << Fmt(tod->system.f1, 3) << " | "
        << Fmt(tod->bleu, 2) << " | " << Fmt(tod->success, 3) << " |\n"
        << "BLEU: " << kBleuVariant << "\n";
  }
  for (const std::string& n : notes) out << "note: " << n << "\n";
  return out.str();
}

}  // namespace mobilecs::metrics
