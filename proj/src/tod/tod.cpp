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

#include "mobilecs/tod/tod.hpp"

#include <algorithm>
#include <set>

#include "httplib.h"
#include "mobilecs/corpus/corpus.hpp"
#include "mobilecs/util/utf8.hpp"

namespace mobilecs::tod {

using corpus::Speaker;

namespace {

// Template placeholders (private use area, never in corpus text).
constexpr char32_t kEntitySlot = U'\uE010';
constexpr char32_t kValueSlot = U'\uE011';

const char* const kFieldOrder[] = {"EH", "U", "EN", "UI", "KB", "SI", "R"};

std::string Escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '\\' || c == '[') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

std::string IntentsJson(const std::vector<Intent>& intents) {
  Json a = Json::array();
  for (const Intent& i : intents) a.push_back(corpus::ToJson(i));
  return a.dump();
}

std::vector<Intent> IntentsFromJson(const Json& j) {
  std::vector<Intent> out;
  for (const Json& x : j) out.push_back(corpus::IntentFromJson(x));
  return out;
}

struct Field {
  std::string name;
  std::string value;
};

// Serialized as "[NAME] value" (or "[NAME]" for an empty value), joined by
// single spaces.
std::string Join(const std::vector<Field>& fields) {
  std::string out;
  for (const Field& f : fields) {
    if (!out.empty()) out.push_back(' ');
    out += "[" + f.name + "]";
    if (!f.value.empty()) out += " " + Escape(f.value);
  }
  return out;
}

std::vector<Field> Split(const std::string& text) {
  std::vector<Field> fields;
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] != '[') throw std::invalid_argument("expected a field delimiter at byte " + std::to_string(i));
    const std::size_t close = text.find(']', i);
    if (close == std::string::npos) throw std::invalid_argument("unterminated field delimiter");
    Field f{text.substr(i + 1, close - i - 1), ""};
    i = close + 1;
    if (i < text.size() && text[i] == ' ') ++i;
    bool escaped = false;
    while (i < text.size()) {
      const char c = text[i];
      if (escaped) {
        f.value.push_back(c);
        escaped = false;
      } else if (c == '\\') {
        escaped = true;
      } else if (c == '[') {
        break;
      } else {
        f.value.push_back(c);
      }
      ++i;
    }
    if (escaped) throw std::invalid_argument("dangling escape");
    if (i < text.size() && !f.value.empty()) {
      // Drop the joining space before the next delimiter.
      if (f.value.back() != ' ') throw std::invalid_argument("missing space before delimiter");
      f.value.pop_back();
    }
    fields.push_back(std::move(f));
  }
  return fields;
}

template <typename F>
auto ParseJsonField(const Field& f, F from_json) {
  try {
    return from_json(Json::parse(f.value));
  } catch (const Json::exception& e) {
    throw std::invalid_argument("field [" + f.name + "]: " + e.what());
  }
}

std::vector<Field> ContextFields(const std::vector<std::string>& history, const std::string& utterance) {
  std::vector<Field> fields{{"EH", ""}};
  for (std::size_t i = 0; i < history.size(); ++i) {
    if (history[i].empty()) throw std::invalid_argument("empty entity name in history");
    if (i == 0) {
      fields.back().value = history[i];
    } else {
      fields.push_back({"SEP", history[i]});
    }
  }
  fields.push_back({"U", utterance});
  return fields;
}

std::vector<Field> SystemFields(const std::vector<std::string>& history, const std::string& utterance,
                                const std::optional<std::string>& entity, const std::vector<Intent>& user_intents,
                                const kb::KBResult& kb_result) {
  std::vector<Field> fields = ContextFields(history, utterance);
  fields.push_back({"EN", entity.value_or("")});
  fields.push_back({"UI", IntentsJson(user_intents)});
  fields.push_back({"KB", kb_result.ToJson().dump()});
  return fields;
}

std::vector<std::u32string> Grams(const std::u32string& s) {
  std::set<std::u32string> g;
  for (std::size_t i = 0; i < s.size(); ++i) {
    g.insert(s.substr(i, 1));
    if (i + 1 < s.size()) g.insert(s.substr(i, 2));
  }
  return {g.begin(), g.end()};
}

double Dice(const std::vector<std::u32string>& a, const std::vector<std::u32string>& b) {
  if (a.empty() && b.empty()) return 1.0;
  std::size_t common = 0, i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] == b[j]) {
      ++common;
      ++i;
      ++j;
    } else if (a[i] < b[j]) {
      ++i;
    } else {
      ++j;
    }
  }
  return 2.0 * static_cast<double>(common) / static_cast<double>(a.size() + b.size());
}

bool IsDigit(char32_t c) { return c >= U'0' && c <= U'9'; }

// Finds `pattern` in `text` where each digit run of the pattern matches any
// digit run. Returns {start, end} or {-1, -1}.
std::pair<int, int> ShapeFind(const std::u32string& text, const std::u32string& pattern, int from = 0) {
  const int n = static_cast<int>(text.size()), m = static_cast<int>(pattern.size());
  for (int s = from; s < n; ++s) {
    int i = s, j = 0;
    bool ok = true;
    while (j < m && ok) {
      if (IsDigit(pattern[j])) {
        while (j < m && IsDigit(pattern[j])) ++j;
        if (i >= n || !IsDigit(text[i])) ok = false;
        while (i < n && IsDigit(text[i])) ++i;
      } else {
        if (i >= n || text[i] != pattern[j]) ok = false;
        ++i;
        ++j;
      }
    }
    // A digit run must not continue one already running before the match.
    if (ok && m > 0 && IsDigit(pattern[0]) && s > 0 && IsDigit(text[s - 1])) ok = false;
    if (ok) return {s, i};
  }
  return {-1, -1};
}

std::size_t LongestCommonSubstring(const std::u32string& a, const std::u32string& b) {
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  std::size_t best = 0;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : 0;
      best = std::max(best, cur[j]);
    }
    std::swap(prev, cur);
  }
  return best;
}

// Replaces the given spans (sorted, overlaps skipped) by single placeholders.
std::u32string ReplaceSpans(const std::u32string& text, std::vector<std::tuple<int, int, char32_t>> spans) {
  std::sort(spans.begin(), spans.end());
  std::u32string out;
  int pos = 0;
  for (const auto& [start, end, mark] : spans) {
    if (start < pos) continue;
    out += text.substr(pos, start - pos);
    out.push_back(mark);
    pos = end;
  }
  out += text.substr(pos);
  return out;
}

void RewriteEntity(std::vector<Intent>& intents, const std::optional<std::string>& entity) {
  for (Intent& i : intents) {
    if (!i.args.entity_name) continue;
    if (entity) {
      i.args.entity_name = *entity;
    } else {
      i.args.entity_name.reset();
    }
  }
}

}  // namespace

// ---- records -----------------------------------------------------------------

Json TurnRecord::ToJson() const {
  Json ui = Json::parse(IntentsJson(user_intents));
  Json si = Json::parse(IntentsJson(system_intents));
  return {{"entity_name_history", entity_name_history},
          {"user_utterance", user_utterance},
          {"predicted_entity", predicted_entity ? Json(*predicted_entity) : Json()},
          {"user_intents", ui},
          {"kb_result", kb_result.ToJson()},
          {"system_intents", si},
          {"response", response}};
}

TurnRecord TurnRecord::FromJson(const Json& j) {
  TurnRecord r;
  r.entity_name_history = j.at("entity_name_history").get<std::vector<std::string>>();
  r.user_utterance = j.at("user_utterance").get<std::string>();
  if (!j.at("predicted_entity").is_null()) r.predicted_entity = j.at("predicted_entity").get<std::string>();
  r.user_intents = IntentsFromJson(j.at("user_intents"));
  r.kb_result = kb::KBResult::FromJson(j.at("kb_result"));
  r.system_intents = IntentsFromJson(j.at("system_intents"));
  r.response = j.at("response").get<std::string>();
  return r;
}

std::string SerializeContext(const std::vector<std::string>& history, const std::string& utterance) {
  return Join(ContextFields(history, utterance));
}

std::string SerializeSystemContext(const std::vector<std::string>& history, const std::string& utterance,
                                   const std::optional<std::string>& entity, const std::vector<Intent>& user_intents,
                                   const kb::KBResult& kb_result) {
  return Join(SystemFields(history, utterance, entity, user_intents, kb_result));
}

std::string SerializeTurnRecord(const TurnRecord& r) {
  std::vector<Field> fields =
      SystemFields(r.entity_name_history, r.user_utterance, r.predicted_entity, r.user_intents, r.kb_result);
  fields.push_back({"SI", IntentsJson(r.system_intents)});
  fields.push_back({"R", r.response});
  return Join(fields);
}

TurnRecord ParseTurnRecord(const std::string& text) {
  TurnRecord r;
  std::size_t next = 0;  // index into kFieldOrder
  for (const Field& f : Split(text)) {
    if (f.name == "SEP") {
      if (next != 1) throw std::invalid_argument("[SEP] outside the entity history");
      if (f.value.empty()) throw std::invalid_argument("empty entity name in history");
      r.entity_name_history.push_back(f.value);
      continue;
    }
    if (next >= std::size(kFieldOrder) || f.name != kFieldOrder[next]) {
      throw std::invalid_argument("unexpected field [" + f.name + "]");
    }
    ++next;
    if (f.name == "EH") {
      if (!f.value.empty()) r.entity_name_history.push_back(f.value);
    } else if (f.name == "U") {
      r.user_utterance = f.value;
    } else if (f.name == "EN") {
      if (!f.value.empty()) r.predicted_entity = f.value;
    } else if (f.name == "UI") {
      r.user_intents = ParseJsonField(f, IntentsFromJson);
    } else if (f.name == "KB") {
      r.kb_result = ParseJsonField(f, kb::KBResult::FromJson);
    } else if (f.name == "SI") {
      r.system_intents = ParseJsonField(f, IntentsFromJson);
    } else {
      r.response = f.value;
    }
  }
  if (next < 2) throw std::invalid_argument("context lacks [EH] and [U]");
  return r;
}

// ---- turn loop ---------------------------------------------------------------

kb::KBResult ResultForIntents(const kb::LocalKB& kb, const std::vector<Intent>& intents, const Schema& schema,
                              std::vector<std::string>* log) {
  for (const Intent& i : intents) {
    if (i.args.empty()) continue;
    const auto q = kb::QueryFromIntentArgs(i.args);
    if (!q) {
      if (log) log->push_back("intent '" + i.name + "' has arguments that map to no query: " + corpus::ToJson(i).dump());
      return {};
    }
    return kb::KbQuery(kb, *q, schema);
  }
  return {};
}

TurnRecord StepTurn(Session& session, const std::string& utterance, Generator& generator, const Schema& schema) {
  TurnRecord r;
  r.entity_name_history = session.history;
  r.user_utterance = utterance;
  UserPrediction up;
  try {
    up = generator.PredictUser(SerializeContext(session.history, utterance));
  } catch (const std::exception& e) {
    throw TodError("user", e.what());
  }
  if (up.entity && up.entity->empty()) up.entity.reset();
  r.predicted_entity = up.entity;
  r.user_intents = std::move(up.intents);
  r.kb_result = ResultForIntents(session.kb, r.user_intents, schema, &session.log);
  SystemPrediction sp;
  try {
    sp = generator.PredictSystem(
        SerializeSystemContext(session.history, utterance, r.predicted_entity, r.user_intents, r.kb_result));
  } catch (const std::exception& e) {
    throw TodError("system", e.what());
  }
  r.system_intents = std::move(sp.intents);
  r.response = std::move(sp.response);
  if (r.predicted_entity &&
      std::find(session.history.begin(), session.history.end(), *r.predicted_entity) == session.history.end()) {
    session.history.push_back(*r.predicted_entity);
  }
  session.records.push_back(r);
  return r;
}

std::vector<Exchange> ExtractExchanges(const Dialogue& d, const kb::LocalKB& kb) {
  std::vector<Exchange> out;
  std::size_t i = 0;
  const std::size_t n = d.turns.size();
  while (i < n && d.turns[i].speaker == Speaker::kSystem) ++i;
  while (i < n) {
    Exchange ex;
    const corpus::Mention* last_mention = nullptr;
    for (; i < n && d.turns[i].speaker == Speaker::kUser; ++i) {
      const auto& t = d.turns[i];
      ex.user_utterance += (ex.user_utterance.empty() ? "" : " ") + t.text;
      ex.user_intents.insert(ex.user_intents.end(), t.intents.begin(), t.intents.end());
      if (!t.mentions.empty()) last_mention = &t.mentions.back();
    }
    bool answered = false;
    for (; i < n && d.turns[i].speaker == Speaker::kSystem; ++i) {
      const auto& t = d.turns[i];
      ex.response += (answered ? " " : "") + t.text;
      ex.system_intents.insert(ex.system_intents.end(), t.intents.begin(), t.intents.end());
      answered = true;
    }
    if (!answered) break;
    for (const Intent& intent : ex.user_intents) {
      if (intent.args.entity_name) {
        ex.entity = intent.args.entity_name;
        break;
      }
    }
    if (!ex.entity && last_mention != nullptr) {
      const kb::KBEntity* e = kb.FindById(last_mention->entity_id);
      ex.entity = e ? e->name : last_mention->surface;
    }
    out.push_back(std::move(ex));
  }
  return out;
}

// ---- oracle ------------------------------------------------------------------

UserPrediction OracleGenerator::PredictUser(const std::string& context) {
  (void)context;
  if (cursor_ >= exchanges_.size()) throw std::out_of_range("oracle has no more exchanges");
  return {exchanges_[cursor_].entity, exchanges_[cursor_].user_intents};
}

SystemPrediction OracleGenerator::PredictSystem(const std::string& context) {
  (void)context;
  if (cursor_ >= exchanges_.size()) throw std::out_of_range("oracle has no more exchanges");
  const Exchange& ex = exchanges_[cursor_++];
  return {ex.system_intents, ex.response};
}

// ---- baseline ----------------------------------------------------------------

BaselineGenerator::BaselineGenerator(std::vector<Entry> entries, std::vector<std::string> names,
                                     std::vector<std::string> surfaces)
    : entries_(std::move(entries)), names_(std::move(names)), surfaces_(std::move(surfaces)) {
  if (entries_.empty()) throw std::invalid_argument("baseline index is empty");
  std::stable_sort(surfaces_.begin(), surfaces_.end(),
                   [](const std::string& a, const std::string& b) { return utf8::Length(a) > utf8::Length(b); });
  for (const Entry& e : entries_) grams_.push_back(Grams(utf8::Decode(e.user)));
}

const std::string& BaselineGenerator::ApologyResponse() {
  static const std::string s = "抱歉这个信息我这边暂时没有查到";
  return s;
}

BaselineGenerator BaselineGenerator::Build(const std::vector<Dialogue>& train, const Schema& schema) {
  std::vector<Entry> entries;
  std::set<std::string> names, surfaces;
  for (const Dialogue& raw : train) {
    const Dialogue d = corpus::RepairEntityTypes(raw, schema).dialogue;
    const kb::LocalKB kb = kb::BuildLocalKb(d, schema);
    for (const auto& e : kb.entities) names.insert(e.name);
    std::size_t i = 0;
    const std::size_t n = d.turns.size();
    while (i < n && d.turns[i].speaker == Speaker::kSystem) ++i;
    while (i < n) {
      Entry entry;
      std::set<std::string> queried;
      for (; i < n && d.turns[i].speaker == Speaker::kUser; ++i) {
        const auto& t = d.turns[i];
        std::vector<std::tuple<int, int, char32_t>> spans;
        for (const auto& m : t.mentions) {
          spans.emplace_back(m.span.start, m.span.end, kEntitySlot);
          surfaces.insert(m.surface);
        }
        if (!entry.user.empty()) entry.user += " ";
        entry.user += utf8::Encode(ReplaceSpans(utf8::Decode(t.text), spans));
        entry.user_intents.insert(entry.user_intents.end(), t.intents.begin(), t.intents.end());
      }
      for (const Intent& intent : entry.user_intents) {
        if (intent.args.attribute) queried.insert(*intent.args.attribute);
      }
      bool answered = false;
      for (; i < n && d.turns[i].speaker == Speaker::kSystem; ++i) {
        const auto& t = d.turns[i];
        std::vector<std::tuple<int, int, char32_t>> spans;
        for (const auto& m : t.mentions) {
          spans.emplace_back(m.span.start, m.span.end, kEntitySlot);
          surfaces.insert(m.surface);
        }
        for (const auto& turn : d.turns) {
          for (const auto& x : turn.triples) {
            if (x.value_span.turn == static_cast<int>(i) && queried.count(x.slot)) {
              spans.emplace_back(x.value_span.start, x.value_span.end, kValueSlot);
            }
          }
        }
        if (answered) entry.response += " ";
        entry.response += utf8::Encode(ReplaceSpans(utf8::Decode(t.text), spans));
        entry.system_intents.insert(entry.system_intents.end(), t.intents.begin(), t.intents.end());
        answered = true;
      }
      if (!answered) break;
      entries.push_back(std::move(entry));
    }
  }
  return BaselineGenerator(std::move(entries), {names.begin(), names.end()}, {surfaces.begin(), surfaces.end()});
}

std::optional<std::string> BaselineGenerator::PredictEntity(const std::vector<std::string>& history,
                                                            const std::string& utterance) const {
  const std::u32string u = utf8::Decode(utterance);
  // Known entity names, digit runs matching any digits; longest match wins.
  int best_len = 0, best_start = 0;
  for (const std::string& name : names_) {
    const auto [s, e] = ShapeFind(u, utf8::Decode(name));
    if (s >= 0 && (e - s > best_len || (e - s == best_len && s < best_start))) {
      best_len = e - s;
      best_start = s;
    }
  }
  if (best_len > 0) return utf8::Encode(u.substr(best_start, best_len));
  for (auto it = history.rbegin(); it != history.rend(); ++it) {
    if (u.find(utf8::Decode(*it)) != std::u32string::npos) return *it;
  }
  const std::string* unique = nullptr;
  int hits = 0;
  for (const std::string& name : history) {
    if (LongestCommonSubstring(utf8::Decode(name), u) >= 2) {
      unique = &name;
      ++hits;
    }
  }
  if (hits == 1) return *unique;
  if (!history.empty()) return history.back();
  return std::nullopt;
}

std::string BaselineGenerator::Delexicalize(const std::string& utterance,
                                            const std::optional<std::string>& entity) const {
  std::u32string u = utf8::Decode(utterance);
  std::vector<std::u32string> patterns;
  if (entity) patterns.push_back(utf8::Decode(*entity));
  for (const std::string& s : surfaces_) patterns.push_back(utf8::Decode(s));
  std::vector<std::tuple<int, int, char32_t>> spans;
  std::vector<bool> taken(u.size(), false);
  for (const std::u32string& p : patterns) {
    if (p.empty()) continue;
    for (int from = 0;;) {
      const auto [s, e] = ShapeFind(u, p, from);
      if (s < 0) break;
      if (std::none_of(taken.begin() + s, taken.begin() + e, [](bool b) { return b; })) {
        spans.emplace_back(s, e, kEntitySlot);
        std::fill(taken.begin() + s, taken.begin() + e, true);
      }
      from = s + 1;
    }
  }
  return utf8::Encode(ReplaceSpans(u, spans));
}

std::size_t BaselineGenerator::Nearest(const std::string& utterance, const std::optional<std::string>& entity) const {
  const auto g = Grams(utf8::Decode(Delexicalize(utterance, entity)));
  std::size_t best = 0;
  double best_score = -1.0;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const double s = Dice(g, grams_[i]);
    if (s > best_score) {
      best_score = s;
      best = i;
    }
  }
  return best;
}

UserPrediction BaselineGenerator::PredictUser(const std::string& context) {
  const TurnRecord ctx = ParseTurnRecord(context);
  UserPrediction p;
  p.entity = PredictEntity(ctx.entity_name_history, ctx.user_utterance);
  p.intents = entries_[Nearest(ctx.user_utterance, p.entity)].user_intents;
  RewriteEntity(p.intents, p.entity);
  return p;
}

SystemPrediction BaselineGenerator::PredictSystem(const std::string& context) {
  const TurnRecord ctx = ParseTurnRecord(context);
  const Entry& e = entries_[Nearest(ctx.user_utterance, ctx.predicted_entity)];
  const std::u32string tmpl = utf8::Decode(e.response);
  const bool needs_value = tmpl.find(kValueSlot) != std::u32string::npos;
  SystemPrediction p;
  if (needs_value && ctx.kb_result.status != kb::KBStatus::kFound) {
    p.intents = {Intent{"抱歉", {}}};
    p.response = ApologyResponse();
    return p;
  }
  std::string values;
  for (const std::string& v : ctx.kb_result.values) values += (values.empty() ? "" : "、") + v;
  for (char32_t c : tmpl) {
    if (c == kEntitySlot) {
      p.response += ctx.predicted_entity.value_or("");
    } else if (c == kValueSlot) {
      p.response += values;
    } else {
      p.response += utf8::Encode(c);
    }
  }
  p.intents = e.system_intents;
  RewriteEntity(p.intents, ctx.predicted_entity);
  return p;
}

Json BaselineGenerator::ToJson() const {
  Json entries = Json::array();
  for (const Entry& e : entries_) {
    entries.push_back({{"user", e.user},
                       {"user_intents", Json::parse(IntentsJson(e.user_intents))},
                       {"system_intents", Json::parse(IntentsJson(e.system_intents))},
                       {"response", e.response}});
  }
  return {{"format", "mobilecs-tod-baseline"}, {"entries", entries}, {"names", names_}, {"surfaces", surfaces_}};
}

BaselineGenerator BaselineGenerator::FromJson(const Json& j) {
  if (j.value("format", "") != "mobilecs-tod-baseline") throw std::runtime_error("not a baseline index");
  std::vector<Entry> entries;
  for (const Json& e : j.at("entries")) {
    entries.push_back({e.at("user").get<std::string>(), IntentsFromJson(e.at("user_intents")),
                       IntentsFromJson(e.at("system_intents")), e.at("response").get<std::string>()});
  }
  return BaselineGenerator(std::move(entries), j.at("names").get<std::vector<std::string>>(),
                           j.at("surfaces").get<std::vector<std::string>>());
}

// ---- external ----------------------------------------------------------------

Json ExternalGenerator::Call(const std::string& stage, const std::string& context) const {
  const auto scheme = url_.find("://");
  if (scheme == std::string::npos) throw std::invalid_argument("url without scheme: " + url_);
  const auto path_at = url_.find('/', scheme + 3);
  httplib::Client client(url_.substr(0, path_at));
  const std::string path = path_at == std::string::npos ? "/" : url_.substr(path_at);
  const auto res = client.Post(path, Json{{"stage", stage}, {"context", context}}.dump(), "application/json");
  if (!res) throw std::runtime_error("external generator unreachable at " + url_);
  if (res->status != 200) throw std::runtime_error("external generator returned HTTP " + std::to_string(res->status));
  return Json::parse(res->body);
}

UserPrediction ExternalGenerator::PredictUser(const std::string& context) {
  const Json j = Call("user", context);
  UserPrediction p;
  if (j.contains("entity") && !j.at("entity").is_null()) p.entity = j.at("entity").get<std::string>();
  p.intents = IntentsFromJson(j.at("user_intents"));
  return p;
}

SystemPrediction ExternalGenerator::PredictSystem(const std::string& context) {
  const Json j = Call("system", context);
  return {IntentsFromJson(j.at("system_intents")), j.at("response").get<std::string>()};
}

// ---- evaluation --------------------------------------------------------------

TodEvaluation EvaluateTod(const std::vector<Dialogue>& dialogues, const Schema& schema,
                          const GeneratorFactory& factory) {
  TodEvaluation ev;
  std::vector<kb::LocalKB> kbs;
  std::vector<kb::UserGoal> goals;
  std::vector<std::vector<std::string>> responses;
  std::vector<std::vector<Intent>> user_pred, user_gold, sys_pred, sys_gold;
  std::vector<std::string> generated, references;
  kbs.reserve(dialogues.size());
  goals.reserve(dialogues.size());
  for (const Dialogue& raw : dialogues) {
    const Dialogue d = corpus::RepairEntityTypes(raw, schema).dialogue;
    std::vector<std::string> diagnostics;
    kbs.push_back(kb::BuildLocalKb(d, schema, &diagnostics));
    goals.push_back(kb::BuildUserGoal(d, kbs.back(), schema, &diagnostics));
    for (const auto& diag : diagnostics) ev.log.push_back(d.id + ": " + diag);
    const std::vector<Exchange> exchanges = ExtractExchanges(d, kbs.back());
    std::unique_ptr<Generator> gen = factory(d, exchanges);
    Session session;
    session.kb = kbs.back();
    responses.emplace_back();
    for (const Exchange& ex : exchanges) {
      const TurnRecord r = StepTurn(session, ex.user_utterance, *gen, schema);
      ++ev.turns;
      if (r.kb_result != ResultForIntents(session.kb, r.user_intents, schema)) ++ev.kb_inconsistencies;
      user_pred.push_back(r.user_intents);
      user_gold.push_back(ex.user_intents);
      sys_pred.push_back(r.system_intents);
      sys_gold.push_back(ex.system_intents);
      generated.push_back(r.response);
      references.push_back(ex.response);
      responses.back().push_back(r.response);
    }
    for (const auto& line : session.log) ev.log.push_back(d.id + ": " + line);
    ev.records.push_back(std::move(session.records));
  }
  ev.scores.user = metrics::IntentPRF(user_pred, user_gold).prf;
  ev.scores.system = metrics::IntentPRF(sys_pred, sys_gold).prf;
  if (generated.empty()) {
    ev.log.push_back("no exchanges to score; BLEU reported as 0");
  } else {
    ev.scores.bleu = metrics::Bleu(generated, references);
  }
  std::vector<metrics::SuccessCase> cases;
  for (std::size_t i = 0; i < goals.size(); ++i) cases.push_back({&goals[i], &kbs[i], responses[i]});
  ev.scores.success = cases.empty() ? 0.0 : metrics::SuccessRate(cases);
  return ev;
}

}  // namespace mobilecs::tod
