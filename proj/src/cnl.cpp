#include "taskdraft/cnl.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "taskdraft/error.hpp"
#include "taskdraft/records.hpp"

namespace taskdraft::cnl {

namespace {

std::vector<std::string> split_words(std::string_view text) {
  std::vector<std::string> out;
  std::istringstream in{std::string(text)};
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

std::optional<Slot> parse_slot(const std::string& word) {
  if (word.size() < 3 || word.front() != '[' || word.back() != ']') return std::nullopt;
  std::string inner = word.substr(1, word.size() - 2);
  auto colon = inner.find(':');
  if (colon == std::string::npos) return Slot{inner, inner};
  return Slot{inner.substr(0, colon), inner.substr(colon + 1)};
}

Pattern parse_pattern_unchecked(std::string_view text, std::size_t line) {
  Pattern p;
  for (auto& w : split_words(text)) {
    if (w.front() == '[' || w.back() == ']') {
      auto slot = parse_slot(w);
      if (!slot || slot->name.empty() || slot->concept_id.empty()) throw ParseError(line, "malformed slot '" + w + "'");
      p.tokens.emplace_back(std::move(*slot));
    } else {
      p.tokens.emplace_back(std::move(w));
    }
  }
  return p;
}

std::optional<kb::Role> role_of(std::string_view name) {
  if (name == "actor") return kb::Role::actor;
  if (name == "actee") return kb::Role::actee;
  if (name == "location") return kb::Role::location;
  if (name == "source") return kb::Role::source;
  return std::nullopt;
}

Pattern substitute(const Pattern& p, std::size_t token_index, const std::vector<PatternToken>& replacement) {
  Pattern out;
  out.tokens.reserve(p.tokens.size() + replacement.size());
  out.tokens.insert(out.tokens.end(), p.tokens.begin(), p.tokens.begin() + static_cast<long>(token_index));
  out.tokens.insert(out.tokens.end(), replacement.begin(), replacement.end());
  out.tokens.insert(out.tokens.end(), p.tokens.begin() + static_cast<long>(token_index) + 1, p.tokens.end());
  return out;
}

std::optional<std::size_t> nth_slot(const Pattern& p, std::size_t n) {
  for (std::size_t i = 0; i < p.tokens.size(); ++i) {
    if (std::holds_alternative<Slot>(p.tokens[i]) && n-- == 0) return i;
  }
  return std::nullopt;
}

std::string join(const std::vector<std::string>& words) {
  std::string out;
  for (const auto& w : words) {
    if (!out.empty()) out.push_back(' ');
    out += w;
  }
  return out;
}

}  // namespace

bool Pattern::ground() const { return slot_count() == 0; }

std::size_t Pattern::slot_count() const {
  return static_cast<std::size_t>(
      std::count_if(tokens.begin(), tokens.end(), [](const auto& t) { return std::holds_alternative<Slot>(t); }));
}

std::string Pattern::surface() const {
  std::string out;
  for (const auto& t : tokens) {
    if (!out.empty()) out.push_back(' ');
    if (const auto* w = std::get_if<std::string>(&t)) {
      out += *w;
    } else {
      out += "[" + std::get<Slot>(t).concept_id + "]";
    }
  }
  return out;
}

Pattern parse_pattern(std::string_view text, const kb::TaskModel& model) {
  Pattern p = parse_pattern_unchecked(text, 1);
  for (const auto& t : p.tokens) {
    if (const auto* s = std::get_if<Slot>(&t); s && !model.find_concept(s->concept_id)) {
      throw Error("unknown-concept", s->concept_id);
    }
  }
  return p;
}

Grammar parse_grammar(std::string_view input) {
  auto file = text::read_record_file(input, "taskdraft-grammar", 1);
  Grammar g;
  for (const auto& r : file.records) {
    if (r.keyword() != "frame") throw ParseError(r.line(), "unknown record '" + r.keyword() + "'");
    r.allow_only({"actor"});
    Frame f;
    f.process = r.arg(0, "a process concept");
    f.actor = r.field("actor");
    f.rhs = parse_pattern_unchecked(r.arg(1, "a quoted pattern"), r.line());
    f.line = r.line();
    bool has_actor_slot = false;
    for (const auto& t : f.rhs.tokens) {
      if (const auto* s = std::get_if<Slot>(&t)) {
        auto role = role_of(s->name);
        if (!role) throw ParseError(r.line(), "frame slot must be named by a role, got '" + s->name + "'");
        if (*role == kb::Role::actor) has_actor_slot = true;
      }
    }
    if (has_actor_slot == f.actor.has_value()) {
      throw ParseError(r.line(), "frame needs exactly one of actor= or an [actor:...] slot");
    }
    g.frames.push_back(std::move(f));
  }
  return g;
}

std::string GroundSentence::text() const { return join(words); }

std::vector<std::string> instance_words(std::string_view instance_id) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : instance_id) {
    if (c == '-') {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

// ---------------------------------------------------------------------------

Engine::Engine(const Grammar& grammar, const kb::TaskModel& model) : grammar_(grammar), model_(model) {
  compute_liveness();
}

void Engine::compute_liveness() {
  std::set<std::string> live;
  for (const auto& i : model_.instances()) live.insert(i.concept_id);
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& f : grammar_.frames) {
      if (live.count(f.process)) continue;
      bool ok = std::all_of(f.rhs.tokens.begin(), f.rhs.tokens.end(), [&](const PatternToken& t) {
        const auto* s = std::get_if<Slot>(&t);
        return !s || live.count(s->concept_id);
      });
      if (ok) changed |= live.insert(f.process).second;
    }
    for (const auto& c : model_.concepts()) {
      if (c.parent && live.count(c.id) && !live.count(*c.parent)) {
        live.insert(*c.parent);
        changed = true;
      }
    }
  }
  live_.assign(live.begin(), live.end());
}

bool Engine::live(std::string_view concept_id) const {
  return std::binary_search(live_.begin(), live_.end(), concept_id);
}

bool Engine::pattern_live(const Pattern& p) const {
  return std::all_of(p.tokens.begin(), p.tokens.end(), [&](const PatternToken& t) {
    const auto* s = std::get_if<Slot>(&t);
    return !s || live(s->concept_id);
  });
}

std::vector<Pattern> Engine::expansions(const Pattern& pattern, std::size_t slot_index) const {
  auto at = nth_slot(pattern, slot_index);
  if (!at) throw Error("not-a-slot", "slot " + std::to_string(slot_index) + " of '" + pattern.surface() + "'");
  const Slot& slot = std::get<Slot>(pattern.tokens[*at]);

  std::vector<Pattern> out;
  for (const auto& child : model_.children_of(slot.concept_id)) {
    out.push_back(substitute(pattern, *at, {Slot{slot.name, child}}));
  }
  for (const auto& inst : model_.instances()) {
    if (inst.concept_id != slot.concept_id) continue;
    auto words = instance_words(inst.id);
    out.push_back(substitute(pattern, *at, std::vector<PatternToken>(words.begin(), words.end())));
  }
  for (const auto& f : grammar_.frames) {
    if (f.process == slot.concept_id) out.push_back(substitute(pattern, *at, f.rhs.tokens));
  }

  std::erase_if(out, [&](const Pattern& p) { return !pattern_live(p); });
  std::stable_sort(out.begin(), out.end(),
                   [](const Pattern& a, const Pattern& b) { return a.surface() < b.surface(); });
  return out;
}

GroundSentence Engine::default_completion(const Pattern& pattern) const {
  Pattern current = pattern;
  // Each step replaces one slot; a non-recursive grammar bottoms out well
  // before this bound.
  for (std::size_t step = 0; !current.ground(); ++step) {
    if (step > 10000) throw Error("no-ground-form", pattern.surface() + " (no fixpoint)");
    auto options = expansions(current, 0);
    if (options.empty()) throw Error("no-ground-form", pattern.surface());
    current = std::move(options.front());
  }
  GroundSentence out;
  for (const auto& t : current.tokens) out.words.push_back(std::get<std::string>(t));
  try {
    out.complex = parse(out.text());
  } catch (const Error&) {
    // A completed sub-phrase (e.g. "[document]" -> "current document") is
    // ground but not a sentence.
  }
  return out;
}

namespace {

struct Match {
  std::map<std::string, std::string> bindings;  // role -> instance id
};

class Matcher {
 public:
  Matcher(const kb::TaskModel& model, const std::vector<std::string>& words) : model_(model), words_(words) {
    for (const auto& inst : model.instances()) vocab_.emplace_back(&inst, instance_words(inst.id));
  }

  void run(const Frame& frame, std::size_t ti, std::size_t wi, Match& m, std::vector<std::pair<const Frame*, Match>>& out) {
    if (ti == frame.rhs.tokens.size()) {
      if (wi == words_.size()) {
        out.emplace_back(&frame, m);
      } else {
        furthest_ = std::max(furthest_, wi);
      }
      return;
    }
    const auto& tok = frame.rhs.tokens[ti];
    if (const auto* w = std::get_if<std::string>(&tok)) {
      if (wi < words_.size() && words_[wi] == *w) {
        run(frame, ti + 1, wi + 1, m, out);
      } else {
        furthest_ = std::max(furthest_, wi);
      }
      return;
    }
    const Slot& slot = std::get<Slot>(tok);
    bool any = false;
    for (const auto& [inst, iw] : vocab_) {
      if (!model_.subsumes(slot.concept_id, inst->concept_id)) continue;
      if (wi + iw.size() > words_.size()) continue;
      if (!std::equal(iw.begin(), iw.end(), words_.begin() + static_cast<long>(wi))) continue;
      any = true;
      m.bindings[slot.name] = inst->id;
      run(frame, ti + 1, wi + iw.size(), m, out);
      m.bindings.erase(slot.name);
    }
    if (!any) furthest_ = std::max(furthest_, wi);
  }

  std::size_t furthest() const { return furthest_; }

 private:
  const kb::TaskModel& model_;
  const std::vector<std::string>& words_;
  std::vector<std::pair<const kb::Instance*, std::vector<std::string>>> vocab_;
  std::size_t furthest_ = 0;
};

}  // namespace

kb::ActionComplex Engine::parse(std::string_view sentence) const {
  auto words = split_words(sentence);
  Matcher matcher(model_, words);
  std::vector<std::pair<const Frame*, Match>> parses;
  for (const auto& f : grammar_.frames) {
    Match m;
    matcher.run(f, 0, 0, m, parses);
  }
  if (parses.empty()) {
    std::size_t pos = matcher.furthest();
    std::string at = pos < words.size() ? " '" + words[pos] + "'" : " (end of sentence)";
    throw Error("not-in-grammar", "position " + std::to_string(pos) + at);
  }
  if (parses.size() > 1) {
    throw Error("ambiguous", std::to_string(parses.size()) + " parses for '" + std::string(sentence) + "'");
  }

  const auto& [frame, match] = parses.front();
  kb::ActionComplex c;
  c.process = frame->process;
  if (frame->actor) c.actor = *frame->actor;
  for (const auto& [role_name, id] : match.bindings) {
    switch (*role_of(role_name)) {
      case kb::Role::actor: c.actor = id; break;
      case kb::Role::actee: c.actee = id; break;
      case kb::Role::location: c.location = id; break;
      case kb::Role::source: c.source = id; break;
      case kb::Role::means: break;
    }
  }
  return c;
}

std::string Engine::render(const kb::ActionComplex& c) const {
  if (c.actee_open) throw Error("unrenderable", c.process + " has an open text slot");
  if (c.means) throw Error("unrenderable", "the grammar has no means role");

  for (const auto& f : grammar_.frames) {
    if (f.process != c.process) continue;
    if (f.actor && *f.actor != c.actor) continue;

    std::set<kb::Role> needed;
    for (kb::Role r : {kb::Role::actee, kb::Role::location, kb::Role::source}) {
      if (c.filler(r)) needed.insert(r);
    }
    std::vector<std::string> words;
    bool ok = true;
    for (const auto& t : f.rhs.tokens) {
      if (const auto* w = std::get_if<std::string>(&t)) {
        words.push_back(*w);
        continue;
      }
      const Slot& s = std::get<Slot>(t);
      kb::Role role = *role_of(s.name);
      const std::string* id = role == kb::Role::actor ? &c.actor : (c.filler(role) ? &*c.filler(role) : nullptr);
      const kb::Instance* inst = id ? model_.find_instance(*id) : nullptr;
      if (!inst || !model_.subsumes(s.concept_id, inst->concept_id)) {
        ok = false;
        break;
      }
      needed.erase(role);
      auto iw = instance_words(inst->id);
      words.insert(words.end(), iw.begin(), iw.end());
    }
    if (ok && needed.empty()) return join(words);
  }
  throw Error("unrenderable", "no grammar frame expresses this " + c.process + " complex");
}

std::vector<std::string> Engine::enumerate(const Pattern& root, std::size_t limit) const {
  std::vector<std::string> out;
  std::vector<Pattern> stack{root};
  while (!stack.empty()) {
    Pattern p = std::move(stack.back());
    stack.pop_back();
    if (p.ground()) {
      out.push_back(p.surface());
      if (out.size() > limit) throw Error("too-many-sentences", std::to_string(limit));
      continue;
    }
    auto next = expansions(p, 0);
    for (auto it = next.rbegin(); it != next.rend(); ++it) stack.push_back(std::move(*it));
  }
  return out;
}

}  // namespace taskdraft::cnl
