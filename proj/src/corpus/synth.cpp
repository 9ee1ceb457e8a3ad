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

#include "mobilecs/corpus/synth.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <random>
#include <set>
#include <stdexcept>

#include "mobilecs/util/utf8.hpp"

namespace mobilecs::corpus {
namespace {

// Plain modulo sampling on mt19937_64 keeps output identical across standard
// libraries (the std distributions are implementation-defined).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  int Uniform(int n) { return static_cast<int>(engine_() % static_cast<std::uint64_t>(n)); }
  double Real() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  bool Chance(double p) { return Real() < p; }

  template <typename T>
  const T& Pick(const std::vector<T>& items) {
    return items[Uniform(static_cast<int>(items.size()))];
  }

 private:
  std::mt19937_64 engine_;
};

std::string Num(int n) { return std::to_string(n); }

// One piece of an utterance under construction.
struct Piece {
  enum class Kind { kText, kMention, kValue };
  Kind kind = Kind::kText;
  std::string text;
  std::string entity_id;  // mention: cluster; value: owner (or @user)
  std::string slot;       // value only
};

using Segment = std::vector<Piece>;

struct Draft {
  Speaker speaker = Speaker::kUser;
  // Segment boundaries are the legal split points for a planted interjection.
  std::vector<Segment> segments;
  std::vector<Intent> intents;
  RedundancyCase planted = RedundancyCase::kNone;
};

struct Entity {
  std::string id;
  std::string true_type;
  std::string annotated_type;
  std::string name;
  std::vector<std::string> pronouns;
  std::map<std::string, std::string> values;
  int full_count = 0;
  std::map<std::string, int> pronoun_count;
};

Piece Text(std::string s) { return Piece{Piece::Kind::kText, std::move(s), {}, {}}; }

Intent MakeIntent(std::string name, std::optional<std::string> entity_name = {},
                  std::optional<std::string> attribute = {},
                  std::optional<std::string> entity_type = {}) {
  return Intent{std::move(name), IntentArgs{std::move(entity_name), std::move(attribute),
                                            std::move(entity_type)}};
}

struct SlotPhrasing {
  std::vector<std::string> questions;  // appended after the entity reference
  std::vector<std::pair<std::string, std::string>> answers;  // prefix, suffix around value
};

const std::map<std::string, SlotPhrasing>& Phrasings() {
  static const std::map<std::string, SlotPhrasing> table = {
      {"价格",
       {{"多少钱", "怎么收费", "一个月多少钱", "资费是多少"},
        {{"每个月", ""}, {"资费是", ""}, {"月租", ""}, {"是", "一个月"}}}},
      {"流量",
       {{"有多少流量", "包含多少流量", "流量是多少"},
        {{"包含", "流量"}, {"流量有", ""}, {"送您", "流量"}}}},
      {"通话时长",
       {{"有多少分钟通话", "通话时长是多少", "能打多少分钟"},
        {{"通话", ""}, {"包含", "通话"}, {"送您", "通话"}}}},
      {"合约期",
       {{"合约期多久", "要签多长时间"}, {{"合约期", ""}, {"要签", ""}}}},
      {"有效期",
       {{"有效期多久", "能用多长时间"}, {{"有效期", ""}, {"可以用", ""}}}},
      {"办理方式",
       {{"怎么办理", "在哪办理", "怎么开通"},
        {{"您可以", "来办理"}, {"办理方式是", ""}, {"开通的话", "就可以"}}}},
      {"地址", {{"在哪里", "地址是哪里", "具体在哪"}, {{"地址在", ""}, {"在", "那边"}}}},
      {"营业时间",
       {{"几点开门", "营业时间是几点", "什么时候上班"},
        {{"营业时间是", ""}, {"", "都营业"}}}},
      {"余额",
       {{"我的话费还剩多少", "帮我查一下余额", "我现在还有多少钱"},
        {{"您的余额还有", ""}, {"您现在话费余额", ""}}}},
      {"剩余流量",
       {{"我还剩多少流量", "帮我查下剩余流量"},
        {{"您本月还剩", "流量"}, {"剩余流量", ""}}}},
      {"积分", {{"我有多少积分", "帮我查一下积分"}, {{"您的积分有", ""}, {"积分还有", ""}}}},
  };
  return table;
}

struct TypeProfile {
  std::vector<std::string> names;
  std::vector<std::string> pronouns;
  std::string type_word;
};

std::map<std::string, TypeProfile> BuildProfiles() {
  std::map<std::string, TypeProfile> p;
  for (int n : {8, 18, 28, 38, 58, 88, 128, 158, 188, 238}) {
    p["主套餐"].names.push_back(Num(n) + "元套餐");
  }
  for (const char* s : {"5G智享套餐", "和校园套餐", "全球通套餐", "动感地带套餐",
                        "神州行套餐", "畅享套餐", "家庭融合套餐"}) {
    p["主套餐"].names.push_back(s);
  }
  p["主套餐"].pronouns = {"这个套餐", "那个套餐"};
  p["主套餐"].type_word = "套餐";
  for (int n : {5, 10, 20, 30, 50}) p["流量包"].names.push_back(Num(n) + "元流量包");
  for (int n : {1, 2, 3, 6}) p["流量包"].names.push_back(Num(n) + "G流量包");
  for (const char* s : {"夜间流量包", "视频流量包", "假日流量包", "日租流量包"}) {
    p["流量包"].names.push_back(s);
  }
  p["流量包"].pronouns = {"这个流量包", "那个流量包"};
  p["流量包"].type_word = "流量包";
  for (const char* s : {"沈那", "城西", "城东", "五一广场", "中山路", "火车站", "人民路",
                        "解放路", "西湖", "万达"}) {
    p["营业厅"].names.push_back(std::string(s) + "营业厅");
  }
  p["营业厅"].pronouns = {"这个营业厅", "那个营业厅"};
  p["营业厅"].type_word = "营业厅";
  for (const char* s : {"国际漫游业务", "来电显示业务", "彩铃业务", "呼叫转移业务",
                        "亲情号业务"}) {
    p["业务"].names.push_back(s);
  }
  p["业务"].pronouns = {"这个业务", "那个业务"};
  p["业务"].type_word = "业务";
  return p;
}

std::string RandomValue(Rng& rng, const std::string& slot, const std::string& name) {
  if (slot == "价格") {
    // Names like "38元套餐" quote their own price.
    const auto pos = name.find("元");
    if (pos != std::string::npos && pos > 0 && std::isdigit(static_cast<unsigned char>(name[0]))) {
      return name.substr(0, pos) + "元";
    }
    return Num(rng.Pick(std::vector<int>{5, 8, 10, 15, 20, 30, 50})) + "元";
  }
  if (slot == "流量") {
    return rng.Chance(0.5) ? Num(rng.Pick(std::vector<int>{1, 2, 5, 10, 20, 30})) + "G"
                           : Num(rng.Pick(std::vector<int>{100, 300, 500, 600, 800})) + "兆";
  }
  if (slot == "通话时长") return Num(rng.Pick(std::vector<int>{100, 200, 300, 500, 1000})) + "分钟";
  if (slot == "合约期") return Num(rng.Pick(std::vector<int>{6, 12, 24})) + "个月";
  if (slot == "有效期") return Num(rng.Pick(std::vector<int>{1, 3, 7, 30})) + "天";
  if (slot == "办理方式") return "发送KT" + Num(10 + rng.Uniform(90)) + "到10086";
  if (slot == "地址") {
    return rng.Pick(std::vector<std::string>{"建设路", "胜利路", "和平路", "新华街", "文化路"}) +
           Num(1 + rng.Uniform(300)) + "号";
  }
  if (slot == "营业时间") {
    return "早上" + Num(rng.Pick(std::vector<int>{8, 9})) + "点到晚上" +
           Num(rng.Pick(std::vector<int>{6, 8, 9})) + "点";
  }
  if (slot == "余额") return Num(rng.Uniform(200)) + "块" + Num(1 + rng.Uniform(9));
  if (slot == "剩余流量") return Num(10 + rng.Uniform(990)) + "兆";
  if (slot == "积分") return Num(100 + rng.Uniform(5000)) + "分";
  throw std::invalid_argument("no value generator for slot " + slot);
}

class DialogueGenerator {
 public:
  DialogueGenerator(const SynthConfig& config, const Schema& schema, Rng& rng,
                    const std::map<std::string, TypeProfile>& profiles)
      : config_(config), schema_(schema), rng_(rng), profiles_(profiles) {}

  Dialogue Generate(const std::string& id) {
    entities_.clear();
    drafts_.clear();
    informed_.clear();
    ChooseEntities();
    BuildBaseDialogue();
    PlantRedundancy();
    return Render(id);
  }

 private:
  void ChooseEntities() {
    static const std::vector<std::string> kTypes = {"主套餐", "主套餐", "流量包", "营业厅",
                                                    "业务"};
    const int n = 1 + rng_.Uniform(3);
    std::set<std::string> used;
    for (int k = 0; k < n; ++k) {
      const std::string& type = rng_.Pick(kTypes);
      const TypeProfile& profile = profiles_.at(type);
      std::string name = rng_.Pick(profile.names);
      if (!used.insert(name).second) continue;
      Entity e;
      e.id = "e" + Num(static_cast<int>(entities_.size()) + 1);
      e.true_type = type;
      e.annotated_type = type;
      if ((type == "主套餐" || type == "流量包") && rng_.Chance(config_.type_confusion_rate)) {
        e.annotated_type = "套餐";
      }
      e.name = name;
      e.pronouns = profile.pronouns;
      for (const std::string& slot : schema_.Find(type)->attributes) {
        e.values[slot] = RandomValue(rng_, slot, name);
      }
      entities_.push_back(std::move(e));
    }
  }

  Piece MentionOf(Entity& e, bool allow_pronoun) {
    if (allow_pronoun && rng_.Chance(0.5)) {
      const std::string& p = rng_.Pick(e.pronouns);
      if (e.pronoun_count[p] + 1 <= e.full_count) {
        ++e.pronoun_count[p];
        return Piece{Piece::Kind::kMention, p, e.id, {}};
      }
    }
    ++e.full_count;
    return Piece{Piece::Kind::kMention, e.name, e.id, {}};
  }

  // Appends the system-side phrase for one attribute as a new segment.
  void AnswerSegment(Draft& d, const std::string& owner, const std::string& slot,
                     const std::string& value, std::optional<Piece> lead) {
    const auto& [prefix, suffix] = rng_.Pick(Phrasings().at(slot).answers);
    Segment seg;
    if (lead) seg.push_back(*lead);
    if (!prefix.empty()) seg.push_back(Text(prefix));
    seg.push_back(Piece{Piece::Kind::kValue, value, owner, slot});
    if (!suffix.empty()) seg.push_back(Text(suffix));
    d.segments.push_back(std::move(seg));
  }

  void AddUser(Segment seg, Intent intent) {
    Draft d;
    d.speaker = Speaker::kUser;
    d.segments.push_back(std::move(seg));
    d.intents.push_back(std::move(intent));
    drafts_.push_back(std::move(d));
  }

  void AddSystem(Draft d) {
    d.speaker = Speaker::kSystem;
    drafts_.push_back(std::move(d));
  }

  void AttributeExchange(Entity& e, const std::string& slot, bool first) {
    static const std::vector<std::string> kFirstLead = {"", "我想问一下", "请问", "你好我想了解一下",
                                                        "那个"};
    static const std::vector<std::string> kFollowLead = {"", "那", "那么", "还有"};
    Segment q;
    const std::string& lead = rng_.Pick(first ? kFirstLead : kFollowLead);
    if (!lead.empty()) q.push_back(Text(lead));
    q.push_back(MentionOf(e, !first));
    q.push_back(Text(rng_.Pick(Phrasings().at(slot).questions)));
    AddUser(std::move(q), MakeIntent("询问", e.name, slot));

    Draft a;
    if (rng_.Chance(0.08)) {
      a.segments.push_back({Text(rng_.Pick(std::vector<std::string>{
          "这个我这边暂时查不到", "不好意思这个信息我这边没有", "这个暂时没有查到"}))});
      a.intents.push_back(MakeIntent("抱歉"));
      AddSystem(std::move(a));
      return;
    }
    if (rng_.Chance(0.4)) {
      a.segments.push_back({Text(rng_.Pick(std::vector<std::string>{"我这边看到", "我帮您查了一下",
                                                                    "我看一下"}))});
    }
    std::optional<Piece> lead_mention;
    if (rng_.Chance(0.5)) lead_mention = MentionOf(e, true);
    AnswerSegment(a, e.id, slot, e.values.at(slot), lead_mention);
    informed_[e.id].insert(slot);
    a.intents.push_back(MakeIntent("告知", e.name, slot));
    if (rng_.Chance(0.3)) {
      std::vector<std::string> rest;
      for (const auto& [s, v] : e.values) {
        if (s != slot && s != "办理方式") rest.push_back(s);
      }
      if (!rest.empty()) {
        const std::string& extra = rng_.Pick(rest);
        a.segments.back().push_back(Text(rng_.Pick(std::vector<std::string>{"", "还", "另外"})));
        AnswerSegment(a, e.id, extra, e.values.at(extra), std::nullopt);
        informed_[e.id].insert(extra);
      }
    }
    AddSystem(std::move(a));
  }

  void AccountExchange() {
    static const std::vector<std::string> kSlots = {"余额", "剩余流量", "积分"};
    const std::string& slot = rng_.Pick(kSlots);
    AddUser({Text(rng_.Pick(Phrasings().at(slot).questions))},
            MakeIntent("求助-查询", std::nullopt, slot));
    Draft a;
    if (rng_.Chance(0.3)) a.segments.push_back({Text("我帮您查了一下")});
    AnswerSegment(a, std::string(kUserProfileId), slot, RandomValue(rng_, slot, ""), std::nullopt);
    a.intents.push_back(MakeIntent("告知", std::nullopt, slot));
    AddSystem(std::move(a));
  }

  void ListingExchange(const std::string& type_name) {
    const std::string& word = profiles_.count(type_name) ? profiles_.at(type_name).type_word : type_name;
    AddUser({Text(rng_.Pick(std::vector<std::string>{"你们有哪些", "有什么", "现在都有什么"}) + word +
                  rng_.Pick(std::vector<std::string>{"", "推荐一下", "可以办"}))},
            MakeIntent("询问", std::nullopt, std::nullopt, type_name));
    Draft a;
    Segment seg{Text(rng_.Pick(std::vector<std::string>{"我们有", "现在有", "目前有"}))};
    bool any = false;
    for (Entity& e : entities_) {
      if (!schema_.IsA(e.true_type, type_name)) continue;
      if (any) seg.push_back(Text("和"));
      seg.push_back(MentionOf(e, false));
      any = true;
    }
    a.segments.push_back(std::move(seg));
    a.intents.push_back(MakeIntent("推荐", std::nullopt, std::nullopt, type_name));
    AddSystem(std::move(a));
  }

  void BuildBaseDialogue() {
    Draft greet;
    greet.segments.push_back({Text(rng_.Pick(std::vector<std::string>{
        "您好很高兴为您服务", "您好请问有什么可以帮您", "您好这里是中国移动"}))});
    greet.intents.push_back(MakeIntent("问候"));
    AddSystem(std::move(greet));

    if (rng_.Chance(0.3)) {
      std::vector<std::string> options;
      for (const Entity& e : entities_) {
        for (const char* t : {"套餐", "流量包", "营业厅", "业务"}) {
          if (schema_.IsA(e.true_type, t) && t != std::string("业务")) options.push_back(t);
        }
        if (e.true_type == "业务") options.push_back("业务");
      }
      ListingExchange(rng_.Pick(options));
    }

    const int account_at = rng_.Chance(0.5) ? rng_.Uniform(static_cast<int>(entities_.size()) + 1) : -1;
    for (std::size_t k = 0; k < entities_.size(); ++k) {
      if (account_at == static_cast<int>(k)) AccountExchange();
      Entity& e = entities_[k];
      std::vector<std::string> slots;
      for (const auto& [s, v] : e.values) slots.push_back(s);
      const int n_queries = std::min<int>(static_cast<int>(slots.size()), 1 + rng_.Uniform(3));
      for (int q = 0; q < n_queries; ++q) {
        std::erase_if(slots, [&](const std::string& s) { return informed_[e.id].count(s) > 0; });
        if (slots.empty()) break;
        const int pick = rng_.Uniform(static_cast<int>(slots.size()));
        const std::string slot = slots[pick];
        slots.erase(slots.begin() + pick);
        AttributeExchange(e, slot, q == 0);
      }
    }
    if (account_at == static_cast<int>(entities_.size())) AccountExchange();

    AddUser({Text(rng_.Pick(std::vector<std::string>{"好的谢谢", "行那我知道了", "好的没问题了"}))},
            MakeIntent("客套"));
    Draft bye;
    bye.segments.push_back({Text(rng_.Pick(std::vector<std::string>{"不客气再见", "好的感谢您的来电再见"}))});
    bye.intents.push_back(MakeIntent("再见"));
    AddSystem(std::move(bye));
  }

  static std::string FlatText(const Draft& d) {
    std::string out;
    for (const Segment& seg : d.segments) {
      for (const Piece& p : seg) out += p.text;
    }
    return out;
  }

  static bool OnlyFullMentions(const Draft& d, const std::vector<Entity>& entities) {
    for (const Segment& seg : d.segments) {
      for (const Piece& p : seg) {
        if (p.kind != Piece::Kind::kMention) continue;
        for (const Entity& e : entities) {
          if (e.id == p.entity_id && p.text != e.name) return false;
        }
      }
    }
    return true;
  }

  // A copy of `d` whose pieces are all text except its mentions.
  static Segment MentionsOnlyCopy(const Draft& d) {
    Segment out;
    for (const Segment& seg : d.segments) {
      for (const Piece& p : seg) {
        out.push_back(p.kind == Piece::Kind::kValue ? Text(p.text) : p);
      }
    }
    return out;
  }

  void PlantRedundancy() {
    // Exchange = user query followed by its system answer. Each exchange hosts
    // at most one event so planted turns never push an answer out of reach of
    // its entity mention.
    struct Slot {
      std::size_t user;
      bool user_ok;
      bool system_ok;
    };
    std::vector<Slot> slots;
    for (std::size_t i = 0; i + 1 < drafts_.size(); ++i) {
      if (drafts_[i].speaker != Speaker::kUser || drafts_[i + 1].speaker != Speaker::kSystem) continue;
      const bool is_query = drafts_[i].intents.front().name != "客套";
      const bool user_ok = is_query && OnlyFullMentions(drafts_[i], entities_);
      const bool system_ok = drafts_[i + 1].segments.size() >= 2;
      if (user_ok || system_ok) slots.push_back({i, user_ok, system_ok});
    }
    if (slots.empty()) return;
    const double base = static_cast<double>(drafts_.size());
    const double r = config_.redundancy_rate;
    const double p = std::min(1.0, r * base / (2.0 * (1.0 - r) * slots.size()));

    std::vector<Draft> out;
    std::size_t next = 0;
    for (const Slot& s : slots) {
      while (next <= s.user + 1) out.push_back(drafts_[next++]);
      if (!rng_.Chance(p)) continue;
      std::vector<RedundancyCase> cases;
      if (s.user_ok) {
        cases.push_back(RedundancyCase::kRepetition);
        cases.push_back(RedundancyCase::kConfirmation);
      }
      if (s.system_ok) cases.push_back(RedundancyCase::kInterjection);
      const RedundancyCase c = rng_.Pick(cases);
      Draft answer = out.back();
      out.pop_back();
      const Draft& query = out.back();
      if (c == RedundancyCase::kRepetition) {
        Draft ask;
        ask.speaker = Speaker::kSystem;
        ask.segments.push_back({Text(rng_.Pick(std::vector<std::string>{
            "呃呃您再说一下", "不好意思您再说一遍", "您说什么我没听清", "您再说一下"}))});
        ask.intents.push_back(MakeIntent("请求-重复"));
        ask.planted = c;
        Draft again;
        again.speaker = Speaker::kUser;
        Segment seg{Text(rng_.Pick(std::vector<std::string>{"我说", "我是说", "就是"}))};
        for (Piece& piece : MentionsOnlyCopy(query)) seg.push_back(piece);
        again.segments.push_back(std::move(seg));
        again.intents = query.intents;
        again.planted = c;
        out.push_back(std::move(ask));
        out.push_back(std::move(again));
      } else if (c == RedundancyCase::kConfirmation) {
        Draft echo;
        echo.speaker = Speaker::kSystem;
        Segment seg;
        if (rng_.Chance(0.5)) seg.push_back(Text("您是说"));
        for (Piece& piece : MentionsOnlyCopy(query)) seg.push_back(piece);
        seg.push_back(Text("是吗"));
        echo.segments.push_back(std::move(seg));
        echo.intents.push_back(MakeIntent("确认"));
        echo.planted = c;
        Draft ack;
        ack.speaker = Speaker::kUser;
        ack.segments.push_back({Text(rng_.Pick(std::vector<std::string>{"对", "是的", "对的", "嗯对"}))});
        ack.intents.push_back(MakeIntent("肯定"));
        ack.planted = c;
        out.push_back(std::move(echo));
        out.push_back(std::move(ack));
      } else {
        const std::size_t cut = 1 + rng_.Uniform(static_cast<int>(answer.segments.size()) - 1);
        Draft head = answer;
        head.segments.assign(answer.segments.begin(), answer.segments.begin() + cut);
        Draft tail = answer;
        tail.segments.assign(answer.segments.begin() + cut, answer.segments.end());
        tail.planted = c;
        Draft interjection;
        interjection.speaker = Speaker::kUser;
        interjection.segments.push_back({Text(rng_.Pick(std::vector<std::string>{"嗯", "嗯嗯", "哦"}))});
        interjection.intents.push_back(MakeIntent("其他"));
        interjection.planted = c;
        out.push_back(std::move(head));
        out.push_back(std::move(interjection));
        answer = std::move(tail);
      }
      out.push_back(std::move(answer));
    }
    while (next < drafts_.size()) out.push_back(drafts_[next++]);
    drafts_ = std::move(out);
  }

  Dialogue Render(const std::string& id) const {
    std::map<std::string, const Entity*> by_id;
    for (const Entity& e : entities_) by_id[e.id] = &e;
    Dialogue d;
    d.id = id;
    for (std::size_t i = 0; i < drafts_.size(); ++i) {
      const Draft& draft = drafts_[i];
      Turn t;
      t.index = static_cast<int>(i);
      t.speaker = draft.speaker;
      t.intents = draft.intents;
      t.planted = draft.planted;
      int offset = 0;
      for (const Segment& seg : draft.segments) {
        for (const Piece& p : seg) {
          const int len = utf8::Length(p.text);
          const Span span{t.index, offset, offset + len};
          if (p.kind == Piece::Kind::kMention) {
            t.mentions.push_back(
                Mention{span, p.text, p.entity_id, by_id.at(p.entity_id)->annotated_type});
          } else if (p.kind == Piece::Kind::kValue) {
            t.triples.push_back(TripleAnnotation{p.entity_id, p.slot, p.text, span});
          }
          t.text += p.text;
          offset += len;
        }
      }
      d.turns.push_back(std::move(t));
    }
    return d;
  }

  const SynthConfig& config_;
  const Schema& schema_;
  Rng& rng_;
  const std::map<std::string, TypeProfile>& profiles_;
  std::vector<Entity> entities_;
  std::vector<Draft> drafts_;
  std::map<std::string, std::set<std::string>> informed_;
};

}  // namespace

CorpusSplit SynthesizeCorpus(const SynthConfig& config, const Schema& schema) {
  for (const char* type : {"主套餐", "流量包", "营业厅", "业务", "套餐"}) {
    if (!schema.HasType(type)) {
      throw std::invalid_argument(std::string("synthetic generator needs entity type ") + type);
    }
  }
  for (const char* slot : {"余额", "剩余流量", "积分"}) {
    if (!schema.IsUserAttribute(slot)) {
      throw std::invalid_argument(std::string("synthetic generator needs user attribute ") + slot);
    }
  }
  const auto profiles = BuildProfiles();
  Rng rng(config.seed);
  DialogueGenerator generator(config, schema, rng, profiles);

  const int n = std::max(config.n_dialogues, 0);
  const int n_test = n / 10;
  const int n_dev = n / 10;
  const int n_train = n - n_dev - n_test;
  CorpusSplit corpus;
  for (int k = 0; k < n; ++k) {
    char id[48];
    std::snprintf(id, sizeof(id), "syn-%llu-%05d", static_cast<unsigned long long>(config.seed), k);
    Dialogue d = generator.Generate(id);
    if (k < n_train) {
      corpus.train.push_back(std::move(d));
    } else if (k < n_train + n_dev) {
      corpus.dev.push_back(std::move(d));
    } else {
      corpus.test.push_back(std::move(d));
    }
  }
  return corpus;
}

}  // namespace mobilecs::corpus
