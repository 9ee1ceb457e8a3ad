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

// Small hand-built dialogues shared by unit and acceptance tests.

#include <stdexcept>
#include <string>

#include "mobilecs/corpus/types.hpp"
#include "mobilecs/util/utf8.hpp"

namespace mobilecs::testing {

using corpus::Dialogue;
using corpus::Intent;
using corpus::Speaker;
using corpus::Span;
using corpus::Turn;

// Span of the first occurrence of `needle` in `text`.
inline Span SpanOf(int turn, const std::string& text, const std::string& needle) {
  const auto pos = text.find(needle);
  if (pos == std::string::npos) throw std::logic_error("fixture needle not found: " + needle);
  const int start = utf8::Length(text.substr(0, pos));
  return Span{turn, start, start + utf8::Length(needle)};
}

class DialogueBuilder {
 public:
  explicit DialogueBuilder(std::string id) { d_.id = std::move(id); }

  DialogueBuilder& Say(Speaker speaker, std::string text, std::vector<Intent> intents = {}) {
    Turn t;
    t.index = static_cast<int>(d_.turns.size());
    t.speaker = speaker;
    t.text = std::move(text);
    t.intents = std::move(intents);
    d_.turns.push_back(std::move(t));
    return *this;
  }
  DialogueBuilder& User(std::string text, std::vector<Intent> intents = {}) {
    return Say(Speaker::kUser, std::move(text), std::move(intents));
  }
  DialogueBuilder& System(std::string text, std::vector<Intent> intents = {}) {
    return Say(Speaker::kSystem, std::move(text), std::move(intents));
  }
  // Annotates the last turn.
  DialogueBuilder& Mention(const std::string& surface, std::string entity, std::string type) {
    Turn& t = d_.turns.back();
    t.mentions.push_back({SpanOf(t.index, t.text, surface), surface, std::move(entity), std::move(type)});
    return *this;
  }
  DialogueBuilder& Triple(std::string entity, std::string slot, const std::string& value) {
    Turn& t = d_.turns.back();
    t.triples.push_back({std::move(entity), std::move(slot), value, SpanOf(t.index, t.text, value)});
    return *this;
  }

  Dialogue Build() const { return d_; }

 private:
  Dialogue d_;
};

inline Intent Ask(std::string name, std::string entity, std::string attribute) {
  return Intent{std::move(name), {std::move(entity), std::move(attribute), std::nullopt}};
}
inline Intent Bare(std::string name) { return Intent{std::move(name), {}}; }

inline Dialogue RepetitionFixture() {
  return DialogueBuilder("fixture-repetition")
      .User("成那改成那最便宜那是打打那个长途是多少钱呢", {Bare("询问")})
      .System("呃呃您再说一下", {Bare("请求-重复")})
      .User("我说改成那种你说那个便宜的是打打那个长途是多少钱一分钟呢", {Bare("询问")})
      .Build();
}

inline Dialogue ConfirmationFixture() {
  return DialogueBuilder("fixture-confirmation")
      .User("沈那中学里面", {Bare("询问")})
      .Mention("沈那中学", "e1", "营业厅")
      .System("沈那中学是吗", {Bare("确认")})
      .Mention("沈那中学", "e1", "营业厅")
      .User("对", {Bare("肯定")})
      .Build();
}

inline Dialogue InterjectionFixture() {
  return DialogueBuilder("fixture-interjection")
      .System("三十八我看这边是流量送您六百兆通话送您两百分钟", {Bare("告知")})
      .Mention("三十八", "e1", "主套餐")
      .Triple("e1", "流量", "六百兆")
      .User("嗯", {Bare("其他")})
      .System("前三个月每个月还送您二十块钱话费和一g的流量", {Bare("告知")})
      .Triple("e1", "流量", "一g")
      .Build();
}

// One main-package cluster with a full name and a pronoun, and one price.
inline Dialogue PriceDialogue() {
  return DialogueBuilder("fixture-price")
      .System("您好", {Bare("问候")})
      .User("38M套餐多少钱", {Ask("询问", "38M套餐", "价格")})
      .Mention("38M套餐", "e1", "主套餐")
      .System("那个套餐每个月38元", {Ask("告知", "38M套餐", "价格")})
      .Mention("那个套餐", "e1", "主套餐")
      .Triple("e1", "价格", "38元")
      .Build();
}

}  // namespace mobilecs::testing
