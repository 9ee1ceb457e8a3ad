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

#include "mobilecs/corpus/corpus.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>

#include "mobilecs/util/errors.hpp"
#include "mobilecs/util/utf8.hpp"

namespace mobilecs::corpus {

Json ToJson(const Span& s) {
  return {{"turn", s.turn}, {"start", s.start}, {"end", s.end}};
}

Json ToJson(const Intent& intent) {
  Json args = Json::object();
  if (intent.args.entity_name) args["entity_name"] = *intent.args.entity_name;
  if (intent.args.attribute) args["attribute"] = *intent.args.attribute;
  if (intent.args.entity_type) args["entity_type"] = *intent.args.entity_type;
  Json j = {{"name", intent.name}};
  if (!args.empty()) j["args"] = std::move(args);
  return j;
}

Json ToJson(const Turn& turn) {
  Json mentions = Json::array();
  for (const Mention& m : turn.mentions) {
    mentions.push_back({{"span", ToJson(m.span)},
                        {"surface", m.surface},
                        {"entity_id", m.entity_id},
                        {"entity_type", m.entity_type}});
  }
  Json triples = Json::array();
  for (const TripleAnnotation& t : turn.triples) {
    triples.push_back({{"entity_id", t.entity_id},
                       {"slot", t.slot},
                       {"value", t.value},
                       {"value_span", ToJson(t.value_span)}});
  }
  Json intents = Json::array();
  for (const Intent& i : turn.intents) intents.push_back(ToJson(i));
  Json j = {{"index", turn.index},
            {"speaker", SpeakerName(turn.speaker)},
            {"text", turn.text},
            {"mentions", std::move(mentions)},
            {"triples", std::move(triples)},
            {"intents", std::move(intents)}};
  if (turn.planted != RedundancyCase::kNone) {
    j["planted"] = RedundancyCaseName(turn.planted);
  }
  return j;
}

Json ToJson(const Dialogue& d) {
  Json turns = Json::array();
  for (const Turn& t : d.turns) turns.push_back(ToJson(t));
  return {{"id", d.id}, {"turns", std::move(turns)}};
}

Span SpanFromJson(const Json& j) {
  if (j.is_array()) {
    return Span{j.at(0).get<int>(), j.at(1).get<int>(), j.at(2).get<int>()};
  }
  return Span{j.at("turn").get<int>(), j.at("start").get<int>(),
              j.at("end").get<int>()};
}

Intent IntentFromJson(const Json& j) {
  Intent intent;
  intent.name = j.at("name").get<std::string>();
  if (j.contains("args")) {
    const Json& args = j.at("args");
    for (const auto& [key, value] : args.items()) {
      if (key == "entity_name") {
        intent.args.entity_name = value.get<std::string>();
      } else if (key == "attribute") {
        intent.args.attribute = value.get<std::string>();
      } else if (key == "entity_type") {
        intent.args.entity_type = value.get<std::string>();
      } else {
        throw std::invalid_argument("unknown intent argument '" + key + "'");
      }
    }
  }
  return intent;
}

Dialogue DialogueFromJson(const Json& j) {
  Dialogue d;
  d.id = j.at("id").get<std::string>();
  for (const Json& tj : j.at("turns")) {
    Turn t;
    t.index = tj.at("index").get<int>();
    t.speaker = ParseSpeaker(tj.at("speaker").get<std::string>());
    t.text = tj.at("text").get<std::string>();
    for (const Json& mj : tj.value("mentions", Json::array())) {
      t.mentions.push_back(Mention{SpanFromJson(mj.at("span")),
                                   mj.at("surface").get<std::string>(),
                                   mj.at("entity_id").get<std::string>(),
                                   mj.at("entity_type").get<std::string>()});
    }
    for (const Json& xj : tj.value("triples", Json::array())) {
      t.triples.push_back(TripleAnnotation{xj.at("entity_id").get<std::string>(),
                                           xj.at("slot").get<std::string>(),
                                           xj.at("value").get<std::string>(),
                                           SpanFromJson(xj.at("value_span"))});
    }
    for (const Json& ij : tj.value("intents", Json::array())) {
      t.intents.push_back(IntentFromJson(ij));
    }
    if (tj.contains("planted")) {
      t.planted = ParseRedundancyCase(tj.at("planted").get<std::string>());
    }
    d.turns.push_back(std::move(t));
  }
  return d;
}

namespace {

// Decoded turn texts, computed once per validation.
struct TurnTexts {
  std::vector<std::u32string> cps;

  explicit TurnTexts(const Dialogue& d) {
    for (const Turn& t : d.turns) cps.push_back(utf8::Decode(t.text));
  }

  bool InBounds(const Span& s) const {
    return s.turn >= 0 && s.turn < static_cast<int>(cps.size()) && s.start >= 0 &&
           s.start < s.end && s.end <= static_cast<int>(cps[s.turn].size());
  }

  std::string Slice(const Span& s) const {
    return utf8::Encode(std::u32string_view(cps[s.turn]).substr(s.start, s.length()));
  }
};

}  // namespace

void ValidateDialogue(const Dialogue& d, const Schema& schema,
                      const ValidationOptions& options) {
  auto fail = [&](const std::string& rule) { throw ValidationError(d.id, rule); };
  if (d.id.empty()) fail("empty dialogue id");

  std::optional<TurnTexts> decoded;
  try {
    decoded.emplace(d);
  } catch (const std::invalid_argument& e) {
    fail(std::string("invalid UTF-8 in turn text: ") + e.what());
  }
  const TurnTexts& texts = *decoded;

  std::map<std::string, std::string> entity_type;  // first mention's type
  for (std::size_t i = 0; i < d.turns.size(); ++i) {
    const Turn& t = d.turns[i];
    if (t.index != static_cast<int>(i)) {
      fail("turn indices not contiguous from 0 (turn " + std::to_string(i) + ")");
    }
    for (const Mention& m : t.mentions) {
      if (!texts.InBounds(m.span)) {
        fail("span out of bounds (mention '" + m.surface + "' in turn " +
             std::to_string(i) + ")");
      }
      if (texts.Slice(m.span) != m.surface) {
        fail("mention surface mismatch ('" + m.surface + "' vs text '" +
             texts.Slice(m.span) + "')");
      }
      if (m.entity_id.empty() || m.entity_id == kUserProfileId) {
        fail("mention has invalid entity id '" + m.entity_id + "'");
      }
      if (!schema.HasType(m.entity_type)) {
        fail("unknown entity type '" + m.entity_type + "'");
      }
      entity_type.emplace(m.entity_id, m.entity_type);
    }
    for (const Intent& intent : t.intents) {
      if (!schema.IsIntent(intent.name)) fail("unknown intent '" + intent.name + "'");
    }
  }
  for (const Turn& t : d.turns) {
    for (const TripleAnnotation& x : t.triples) {
      if (!texts.InBounds(x.value_span)) {
        fail("span out of bounds (triple value '" + x.value + "')");
      }
      if (texts.Slice(x.value_span) != x.value) {
        fail("triple value mismatch ('" + x.value + "' vs text '" +
             texts.Slice(x.value_span) + "')");
      }
      if (!schema.IsKnownSlot(x.slot)) fail("unknown slot '" + x.slot + "'");
      if (x.is_user_profile()) {
        if (!schema.IsUserAttribute(x.slot)) {
          fail("slot '" + x.slot + "' is not a user-profile attribute");
        }
        continue;
      }
      auto it = entity_type.find(x.entity_id);
      if (it == entity_type.end()) {
        fail("triple references unknown entity '" + x.entity_id + "'");
      }
      if (options.require_legal_slots && !schema.SlotLegal(it->second, x.slot)) {
        fail("slot '" + x.slot + "' illegal for entity type '" + it->second + "'");
      }
    }
  }
}

Schema LoadSchema(const std::filesystem::path& file) {
  return Schema::FromJson(ReadJsonFile(file));
}

CorpusSplit LoadCorpus(const std::filesystem::path& dir, const Schema& schema) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) {
    throw std::runtime_error("corpus path is not a directory: " + dir.string());
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());

  CorpusSplit corpus;
  std::set<std::string> seen;
  for (const fs::path& file : files) {
    const Json doc = ReadJsonFile(file);
    SplitTag tag;
    std::vector<Dialogue> dialogues;
    try {
      tag = ParseSplitTag(doc.at("split").get<std::string>());
      for (const Json& dj : doc.at("dialogues")) dialogues.push_back(DialogueFromJson(dj));
    } catch (const std::exception& e) {
      throw ParseError(file.string(), 0, e.what());
    }
    for (Dialogue& d : dialogues) {
      ValidateDialogue(d, schema);
      if (!seen.insert(d.id).second) {
        throw ValidationError(d.id, "duplicate dialogue id across corpus files/splits");
      }
      corpus.at(tag).push_back(std::move(d));
    }
  }
  return corpus;
}

void WriteCorpus(const std::filesystem::path& dir, const CorpusSplit& corpus) {
  for (SplitTag tag : {SplitTag::kTrain, SplitTag::kDev, SplitTag::kTest}) {
    const auto& dialogues = corpus.at(tag);
    if (dialogues.empty()) continue;
    Json arr = Json::array();
    for (const Dialogue& d : dialogues) arr.push_back(ToJson(d));
    WriteJsonFile(dir / (std::string(SplitTagName(tag)) + ".json"),
                  {{"split", SplitTagName(tag)}, {"dialogues", std::move(arr)}});
  }
}

RepairResult RepairEntityTypes(const Dialogue& d, const Schema& schema) {
  RepairResult result{d, {}};

  std::vector<std::string> order;  // entity ids by first mention
  std::map<std::string, std::string> original;
  std::map<std::string, std::set<std::string>> observed;
  for (const Turn& t : d.turns) {
    for (const Mention& m : t.mentions) {
      if (original.emplace(m.entity_id, m.entity_type).second) order.push_back(m.entity_id);
    }
  }
  for (const Turn& t : d.turns) {
    for (const TripleAnnotation& x : t.triples) {
      if (!x.is_user_profile()) observed[x.entity_id].insert(x.slot);
    }
  }

  auto covers = [&](const std::string& type, const std::set<std::string>& slots) {
    const EntityTypeDef* def = schema.Find(type);
    if (def == nullptr) return false;
    return std::includes(def->attributes.begin(), def->attributes.end(), slots.begin(),
                         slots.end());
  };

  std::map<std::string, std::string> chosen;
  for (const std::string& id : order) {
    auto obs = observed.find(id);
    if (obs == observed.end()) continue;
    const std::string& from = original[id];
    if (covers(from, obs->second)) {
      chosen[id] = from;
      continue;
    }
    // Most general covering types: covering types whose parent does not cover.
    std::string best;
    int best_depth = -1;
    for (const std::string& name : schema.TypeNames()) {
      if (!covers(name, obs->second)) continue;
      const EntityTypeDef* def = schema.Find(name);
      if (def->parent && covers(*def->parent, obs->second)) continue;
      if (def->depth > best_depth) {  // names iterate in lexicographic order
        best = name;
        best_depth = def->depth;
      }
    }
    if (best.empty()) {
      result.diagnostics.push_back(
          {id, from, from, true, "no schema type covers the observed slots"});
      continue;
    }
    chosen[id] = best;
    result.diagnostics.push_back({id, from, best, false, "retyped " + from + " -> " + best});
  }

  for (Turn& t : result.dialogue.turns) {
    for (Mention& m : t.mentions) {
      auto it = chosen.find(m.entity_id);
      if (it != chosen.end()) m.entity_type = it->second;
    }
  }
  return result;
}

}  // namespace mobilecs::corpus
