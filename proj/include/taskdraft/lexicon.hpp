#pragma once

// Per-language lexicon files.
//
//   taskdraft-lexicon 1 <language>
//   labels verbatim                       UI labels need no translation
//   verb <concept> <form>=<text>...       forms required by the language rules
//   noun <concept> sg=<text> [gender=m|f] [article=definite|none] [alt=<text>]
//   proper <concept>                      instances are named by their label
//   instance <id> [noun=<text>] [name=<text>] [gender=m|f]
//                 [article=definite|none|possessive-of] [of=<instance>] [alt=<text>]
//   label "<ui label>" "<translation>"
//
// `noun` entries name a concept; the noun phrase of an instance combines its
// label with the nearest ancestor's noun. `instance` entries override either
// part for one instance.

#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace taskdraft::realizer {

enum class Gender { none, masculine, feminine };
enum class ArticlePolicy { definite, none, possessive_of };
enum class Category { verb, noun, proper };

struct LexEntry {
  std::string key;
  Category category = Category::noun;
  std::map<std::string, std::string, std::less<>> forms;
  Gender gender = Gender::none;
  ArticlePolicy article = ArticlePolicy::definite;
  std::string owner;  // possessive-of target instance

  const std::string* form(std::string_view name) const;
};

class Lexicon {
 public:
  static Lexicon parse(std::string_view text);

  const std::string& language() const noexcept { return language_; }
  bool labels_verbatim() const noexcept { return labels_verbatim_; }

  const LexEntry* concept_entry(std::string_view concept_id) const;
  const LexEntry* instance_entry(std::string_view instance_id) const;
  std::optional<std::string> translate_label(std::string_view label) const;

 private:
  std::string language_;
  bool labels_verbatim_ = false;
  std::map<std::string, LexEntry, std::less<>> concepts_;
  std::map<std::string, LexEntry, std::less<>> instances_;
  std::map<std::string, std::string, std::less<>> labels_;
};

}  // namespace taskdraft::realizer
