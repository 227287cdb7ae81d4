#include "taskdraft/lexicon.hpp"

#include "taskdraft/error.hpp"
#include "taskdraft/records.hpp"

namespace taskdraft::realizer {

namespace {

Gender read_gender(const text::Record& r) {
  auto g = r.field("gender");
  if (!g) return Gender::none;
  if (*g == "m") return Gender::masculine;
  if (*g == "f") return Gender::feminine;
  throw ParseError(r.line(), "gender must be m or f, got '" + *g + "'");
}

ArticlePolicy read_article(const text::Record& r) {
  auto a = r.field("article");
  if (!a || *a == "definite") return ArticlePolicy::definite;
  if (*a == "none") return ArticlePolicy::none;
  if (*a == "possessive-of") return ArticlePolicy::possessive_of;
  throw ParseError(r.line(), "unknown article policy '" + *a + "'");
}

}  // namespace

const std::string* LexEntry::form(std::string_view name) const {
  auto it = forms.find(name);
  return it == forms.end() ? nullptr : &it->second;
}

Lexicon Lexicon::parse(std::string_view input) {
  auto file = text::read_record_file(input, "taskdraft-lexicon", 1);
  if (file.header_args.size() != 1) throw ParseError(1, "header must name the language: taskdraft-lexicon 1 <language>");

  Lexicon lex;
  lex.language_ = file.header_args.front();
  for (const auto& r : file.records) {
    const auto& kw = r.keyword();
    if (kw == "labels") {
      if (r.arg(0, "a label policy") != "verbatim") throw ParseError(r.line(), "unknown label policy");
      lex.labels_verbatim_ = true;
      continue;
    }
    if (kw == "label") {
      lex.labels_[r.arg(0, "a UI label")] = r.arg(1, "a translation");
      continue;
    }

    LexEntry e;
    e.key = r.arg(0, "an id");
    if (kw == "verb") {
      e.category = Category::verb;
      for (const auto& [k, v] : r.fields()) e.forms[k] = v;
    } else if (kw == "noun") {
      r.allow_only({"sg", "gender", "article", "alt"});
      e.category = Category::noun;
      e.forms["sg"] = r.require("sg");
      if (auto alt = r.field("alt")) e.forms["alt"] = *alt;
      e.gender = read_gender(r);
      e.article = read_article(r);
      if (e.article == ArticlePolicy::possessive_of) throw ParseError(r.line(), "possessive-of applies to instances only");
    } else if (kw == "proper") {
      r.allow_only({});
      e.category = Category::proper;
    } else if (kw == "instance") {
      r.allow_only({"noun", "name", "gender", "article", "of", "alt"});
      e.category = Category::noun;
      if (auto n = r.field("noun")) e.forms["sg"] = *n;
      if (auto n = r.field("name")) e.forms["name"] = *n;
      if (auto alt = r.field("alt")) e.forms["alt"] = *alt;
      e.gender = read_gender(r);
      e.article = read_article(r);
      if (e.article == ArticlePolicy::possessive_of) e.owner = r.require("of");
      if (!lex.instances_.emplace(e.key, e).second) throw ParseError(r.line(), "duplicate entry for " + e.key);
      continue;
    } else {
      throw ParseError(r.line(), "unknown record '" + kw + "'");
    }
    if (!lex.concepts_.emplace(e.key, e).second) throw ParseError(r.line(), "duplicate entry for " + e.key);
  }
  return lex;
}

const LexEntry* Lexicon::concept_entry(std::string_view concept_id) const {
  auto it = concepts_.find(concept_id);
  return it == concepts_.end() ? nullptr : &it->second;
}

const LexEntry* Lexicon::instance_entry(std::string_view instance_id) const {
  auto it = instances_.find(instance_id);
  return it == instances_.end() ? nullptr : &it->second;
}

std::optional<std::string> Lexicon::translate_label(std::string_view label) const {
  if (auto it = labels_.find(label); it != labels_.end()) return it->second;
  if (labels_verbatim_) return std::string(label);
  return std::nullopt;
}

}  // namespace taskdraft::realizer
