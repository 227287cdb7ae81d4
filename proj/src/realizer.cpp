#include "taskdraft/realizer.hpp"

#include <algorithm>
#include <array>
#include <map>

#include "taskdraft/error.hpp"
#include "taskdraft/records.hpp"

namespace taskdraft::realizer {

namespace {

using Det = NounPhrase::Determiner;
using planner::ActKind;
using planner::DiscourseAct;

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

// ---------------------------------------------------------------- English

class English final : public LanguageRules {
 public:
  std::string_view code() const override { return "en"; }

  std::string compose(const std::string& label, const std::string& noun) const override {
    return noun.empty() ? label : label + " " + noun;
  }

  std::string noun_phrase(const NounPhrase& np) const override {
    std::string out;
    switch (np.determiner) {
      case Det::definite: out = "the "; break;
      case Det::indefinite: out = starts_with_vowel(np.head) ? "an " : "a "; break;
      case Det::none: break;
    }
    out += np.head;
    for (const auto& o : np.owner) out += " of " + noun_phrase(o);
    return out;
  }

  std::string title(const Clause& c) const override { return "To " + headline(c.form("base") + rest(c)); }
  std::string instruction(const Clause& c) const override { return capitalize(c.form("base") + rest(c)) + "."; }
  std::string result(const Clause& c) const override {
    return capitalize(noun_phrase(c.actor) + " " + c.form("3sg") + rest(c)) + ".";
  }

  std::string cancellation(const Clause& goal, const std::vector<Clause>& methods,
                           kb::Decomposition mode) const override {
    std::string out = "You can " + goal.form("base") + rest(goal);
    if (!methods.empty()) {
      std::vector<std::string> ways;
      for (const auto& m : methods) ways.push_back(m.form("gerund") + rest(m));
      out += " by " + join(ways, mode == kb::Decomposition::choice ? " or " : " and then ");
    }
    return out + ".";
  }

  std::string warning(const Clause& c) const override { return "Do not " + c.form("base") + rest(c) + "."; }

  std::string_view alternative_marker() const override { return "-OR-"; }
  std::string_view warning_marker() const override { return "Warning: "; }

 private:
  static bool starts_with_vowel(std::string_view s) {
    return !s.empty() && std::string_view("aeiouAEIOU").find(s.front()) != std::string_view::npos;
  }

  std::string rest(const Clause& c) const {
    std::string out;
    if (c.actee) out += " " + noun_phrase(*c.actee);
    if (c.source) out += " from " + noun_phrase(*c.source);
    if (c.location) out += " in " + noun_phrase(*c.location);
    return out;
  }

  // Capitalizes every word except minor ones; never lowercases.
  static std::string headline(const std::string& s) {
    static const std::array<std::string_view, 14> minor = {"a",  "an", "the", "of",  "in", "on", "from",
                                                           "by", "to", "and", "or", "as", "at", "for"};
    std::string out;
    std::size_t i = 0;
    bool first = true;
    while (i <= s.size()) {
      std::size_t j = s.find(' ', i);
      if (j == std::string::npos) j = s.size();
      std::string word = s.substr(i, j - i);
      if (first || std::find(minor.begin(), minor.end(), word) == minor.end()) word = capitalize(word);
      if (!first) out += ' ';
      out += word;
      first = false;
      i = j + 1;
    }
    return out;
  }
};

// ----------------------------------------------------------------- French

class French final : public LanguageRules {
 public:
  std::string_view code() const override { return "fr"; }

  std::string compose(const std::string& label, const std::string& noun) const override {
    return noun.empty() ? label : noun + " " + label;
  }

  std::string noun_phrase(const NounPhrase& np) const override {
    std::string out;
    bool elide = elides(np.head);
    bool fem = np.gender == Gender::feminine;
    switch (np.determiner) {
      case Det::definite: out = elide ? "l'" : fem ? "la " : "le "; break;
      case Det::indefinite: out = fem ? "une " : "un "; break;
      case Det::none: break;
    }
    return out + np.head + owner(np);
  }

  std::string title(const Clause& c) const override {
    std::string out = capitalize(c.form("event"));
    if (c.actee) {
      const std::string* prep = c.verb->form("event-prep");
      out += " " + (prep ? *prep + " " + noun_phrase(*c.actee) : of(*c.actee));
    }
    return out + complements(c);
  }

  std::string instruction(const Clause& c) const override { return capitalize(c.form("inf") + rest(c)) + "."; }
  std::string result(const Clause& c) const override {
    return capitalize(noun_phrase(c.actor) + " " + c.form("fut3sg") + rest(c)) + ".";
  }

  std::string cancellation(const Clause& goal, const std::vector<Clause>& methods,
                           kb::Decomposition mode) const override {
    std::string out = "Vous pouvez " + goal.form("inf") + rest(goal);
    if (!methods.empty()) {
      std::vector<std::string> ways;
      for (const auto& m : methods) ways.push_back(m.form("ppr") + rest(m));
      out += " en " + join(ways, mode == kb::Decomposition::choice ? " ou en " : " puis en ");
    }
    return out + ".";
  }

  std::string warning(const Clause& c) const override { return "Ne pas " + c.form("inf") + rest(c) + "."; }

  std::string_view alternative_marker() const override { return "-OU BIEN-"; }
  std::string_view warning_marker() const override { return "Attention : "; }

 private:
  // Vowel-initial heads take l' and d'. Aspirated h is not modelled.
  static bool elides(std::string_view s) {
    if (s.empty()) return false;
    if (std::string_view("aeiouyAEIOUY").find(s.front()) != std::string_view::npos) return true;
    if (s.size() >= 2 && static_cast<unsigned char>(s[0]) == 0xC3) {
      static constexpr std::string_view accented_vowels = "\xA0\xA2\xA8\xA9\xAA\xAB\xAE\xAF\xB4\xB9\xBB\x80\x82\x88\x89\x8A";
      return accented_vowels.find(s[1]) != std::string_view::npos;
    }
    return false;
  }

  std::string owner(const NounPhrase& np) const {
    std::string out;
    for (const auto& o : np.owner) out += " " + of(o);
    return out;
  }

  // "de" contracted with the determiner: du, de la, de l', d'un, d'une, d'.
  std::string of(const NounPhrase& np) const {
    bool elide = elides(np.head);
    bool fem = np.gender == Gender::feminine;
    std::string out;
    switch (np.determiner) {
      case Det::definite: out = elide ? "de l'" : fem ? "de la " : "du "; break;
      case Det::indefinite: out = fem ? "d'une " : "d'un "; break;
      case Det::none: out = elide ? "d'" : "de "; break;
    }
    return out + np.head + owner(np);
  }

  std::string complements(const Clause& c) const {
    std::string out;
    if (c.source) out += " dans " + noun_phrase(*c.source);
    if (c.location) out += " dans " + noun_phrase(*c.location);
    return out;
  }

  std::string rest(const Clause& c) const {
    return (c.actee ? " " + noun_phrase(*c.actee) : std::string()) + complements(c);
  }
};

std::map<std::string, std::unique_ptr<LanguageRules>, std::less<>>& registry() {
  static std::map<std::string, std::unique_ptr<LanguageRules>, std::less<>> r = [] {
    std::map<std::string, std::unique_ptr<LanguageRules>, std::less<>> m;
    m.emplace("en", std::make_unique<English>());
    m.emplace("fr", std::make_unique<French>());
    return m;
  }();
  return r;
}

// ------------------------------------------------- language-neutral part

class Realizer {
 public:
  Realizer(const kb::TaskModel& model, const Lexicon& lex, const Options& options)
      : model_(model), lex_(lex), rules_(rules_for(lex.language())), options_(options) {}

  const LanguageRules& rules() const { return rules_; }

  std::string leaf(const DiscourseAct& act) {
    switch (act.kind) {
      case ActKind::title: return rules_.title(clause(act.source, true));
      case ActKind::step:
        for (const auto& c : act.children) {
          if (c.kind == ActKind::alternative_group) throw Error("not-a-leaf", act.source);
        }
        return rules_.instruction(clause(act.source, false));
      case ActKind::result: return rules_.result(clause(act.source, false));
      case ActKind::note: {
        std::vector<Clause> methods;
        for (const auto& v : act.via) methods.push_back(clause(v, false));
        return rules_.cancellation(clause(act.source, false), methods, act.via_mode);
      }
      case ActKind::warning_note: return rules_.warning(clause(act.source, false));
      default: throw Error("not-a-leaf", act.source);
    }
  }

 private:
  Clause clause(const std::string& id, bool title) {
    const kb::ActionNode* a = model_.find_action(id);
    if (!a) throw Error("unknown-node", id);
    const kb::ActionComplex& x = a->complex;
    if (x.actee_open) throw Error("unfilled-slot", id);

    Clause c;
    c.process = x.process;
    c.language = lex_.language();
    c.verb = lex_.concept_entry(x.process);
    if (!c.verb || c.verb->category != Category::verb) throw missing(x.process, "verb");
    if (a->is_effect()) c.actor = instance_np(x.actor, false);
    if (x.actee) c.actee = instance_np(*x.actee, title);
    if (x.source) c.source = instance_np(*x.source, false);
    if (x.location) c.location = instance_np(*x.location, false);
    return c;
  }

  Error missing(const std::string& concept_id, const std::string& form) const {
    return Error("missing-lexeme", concept_id + " " + lex_.language() + " " + form);
  }

  const std::string& noun_of(const LexEntry& e) const {
    if (options_.accented) {
      if (const auto* alt = e.form("alt")) return *alt;
    }
    return e.forms.at("sg");
  }

  // Nearest ancestor with a noun or proper entry.
  const LexEntry* kind_entry(const std::string& concept_id) const {
    std::optional<std::string> cur = concept_id;
    for (int guard = 0; cur && guard < 64; ++guard) {
      const LexEntry* e = lex_.concept_entry(*cur);
      if (e && e->category != Category::verb) return e;
      const kb::Concept* c = model_.find_concept(*cur);
      cur = c ? c->parent : std::nullopt;
    }
    throw missing(concept_id, "sg");
  }

  NounPhrase instance_np(const std::string& id, bool generic, int depth = 0) {
    if (depth > 8) throw Error("missing-lexeme", "possessive chain too deep at " + id);
    const kb::Instance* inst = model_.find_instance(id);
    if (!inst) throw Error("unknown-node", id);
    const LexEntry* own = lex_.instance_entry(id);

    NounPhrase np;
    if (generic && inst->generic) {
      const LexEntry* k = kind_entry(inst->concept_id);
      if (k->category == Category::proper) {
        np.determiner = Det::none;
        np.head = label_of(*inst, own);
        return np;
      }
      np.determiner = Det::indefinite;
      np.head = noun_of(*k);
      np.gender = k->gender;
      return np;
    }

    if (own && own->form("sg")) {
      np.determiner = own->article == ArticlePolicy::none ? Det::none : Det::definite;
      np.head = noun_of(*own);
      np.gender = own->gender;
      if (own->article == ArticlePolicy::possessive_of) np.owner.push_back(instance_np(own->owner, false, depth + 1));
      return np;
    }

    const LexEntry* k = kind_entry(inst->concept_id);
    np.head = label_of(*inst, own);
    if (k->category == Category::proper) {
      np.determiner = Det::none;
      return np;
    }
    np.determiner = k->article == ArticlePolicy::none ? Det::none : Det::definite;
    np.head = rules_.compose(np.head, noun_of(*k));
    np.gender = own && own->gender != Gender::none ? own->gender : k->gender;
    return np;
  }

  std::string label_of(const kb::Instance& inst, const LexEntry* own) const {
    if (own) {
      if (const auto* name = own->form("name")) return *name;
    }
    auto t = lex_.translate_label(inst.label);
    if (!t) throw missing(inst.concept_id, "label:" + inst.label);
    return *t;
  }

  const kb::TaskModel& model_;
  const Lexicon& lex_;
  const LanguageRules& rules_;
  Options options_;
};

class Layout {
 public:
  explicit Layout(std::string language) { doc_.language = std::move(language); }

  void line(std::string_view prefix, const std::string& sentence, const std::string& node, std::string_view kind) {
    doc_.text += prefix;
    std::size_t start = doc_.text.size();
    doc_.text += sentence;
    doc_.provenance.push_back(Span{start, doc_.text.size(), node, std::string(kind)});
    doc_.text += "\n";
  }
  void bare(std::string_view s) {
    doc_.text += s;
    doc_.text += "\n";
  }

  RenderedDoc take() { return std::move(doc_); }

 private:
  RenderedDoc doc_;
};

constexpr std::string_view kIndent = "   ";
constexpr std::string_view kBullet = "\xE2\x80\xA2 ";

}  // namespace

const std::string& Clause::form(std::string_view name) const {
  if (verb) {
    if (const auto* f = verb->form(name)) return *f;
  }
  throw Error("missing-lexeme", process + " " + language + " " + std::string(name));
}

const LanguageRules& rules_for(std::string_view code) {
  auto& r = registry();
  auto it = r.find(code);
  if (it == r.end()) throw Error("unknown-language", std::string(code));
  return *it->second;
}

void register_language(std::unique_ptr<LanguageRules> rules) {
  std::string code(rules->code());
  registry()[code] = std::move(rules);
}

RenderedDoc realize_document(const planner::DocPlan& plan, const kb::TaskModel& model, const Lexicon& lexicon,
                             const Options& options) {
  Realizer r(model, lexicon, options);
  Layout out(lexicon.language());

  const DiscourseAct& title = plan.title();
  out.line("", r.leaf(title), title.source, "title");

  const auto& children = plan.root.children;
  bool has_body = !plan.steps().children.empty() || children.size() > 2;
  if (has_body) out.bare("");

  int n = 0;
  for (const auto& step : plan.steps().children) {
    std::string number = std::to_string(++n) + ". ";
    const DiscourseAct* group = nullptr;
    for (const auto& c : step.children) {
      if (c.kind == ActKind::alternative_group) group = &c;
    }
    if (group) {
      bool first = true;
      for (const auto& alt : group->children) {
        if (!first) out.bare(std::string(kIndent) + std::string(r.rules().alternative_marker()));
        out.line(first ? number : std::string(kIndent), r.leaf(alt), alt.source, "alternative");
        first = false;
      }
    } else {
      out.line(number, r.leaf(step), step.source, "step");
    }
    for (const auto& c : step.children) {
      if (c.kind == ActKind::result) out.line(kIndent, r.leaf(c), c.source, "result");
    }
  }

  for (std::size_t i = 2; i < children.size(); ++i) {
    const DiscourseAct& note = children[i];
    if (note.kind == ActKind::warning_note) {
      out.line(std::string(kBullet) + std::string(r.rules().warning_marker()), r.leaf(note), note.source,
               "warning-note");
    } else {
      out.line(kBullet, r.leaf(note), note.source, "note");
    }
  }
  return out.take();
}

std::string realize_act(const planner::DiscourseAct& act, const kb::TaskModel& model, const Lexicon& lexicon,
                        const Options& options) {
  return Realizer(model, lexicon, options).leaf(act);
}

std::string serialize_provenance(const RenderedDoc& doc) {
  std::string out = "taskdraft-provenance 1 " + doc.language + "\n";
  for (const auto& s : doc.provenance) {
    out += std::to_string(s.start) + " " + std::to_string(s.end) + " " + s.kind + " " + s.node + "\n";
  }
  return out;
}

std::vector<Span> parse_provenance(std::string_view input) {
  auto file = text::read_record_file(input, "taskdraft-provenance", 1);
  std::vector<Span> out;
  for (const auto& r : file.records) {
    Span s;
    s.start = static_cast<std::size_t>(text::parse_int(r.keyword(), r.line(), "start"));
    s.end = static_cast<std::size_t>(text::parse_int(r.arg(0, "an end offset"), r.line(), "end"));
    s.kind = r.arg(1, "a kind");
    s.node = r.arg(2, "a node id");
    if (s.end < s.start) throw ParseError(r.line(), "span ends before it starts");
    out.push_back(std::move(s));
  }
  return out;
}

std::string capitalize(std::string s) {
  if (s.empty()) return s;
  auto c0 = static_cast<unsigned char>(s[0]);
  if (c0 >= 'a' && c0 <= 'z') {
    s[0] = static_cast<char>(c0 - 'a' + 'A');
  } else if (c0 == 0xC3 && s.size() >= 2) {
    auto c1 = static_cast<unsigned char>(s[1]);
    if (c1 >= 0xA0 && c1 <= 0xBE && c1 != 0xB7) s[1] = static_cast<char>(c1 - 0x20);
  }
  return s;
}

}  // namespace taskdraft::realizer
