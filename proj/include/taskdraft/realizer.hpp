#pragma once

// Surface realization: a DocPlan plus a lexicon gives instruction text.
// Language specifics (word order, articles, verb forms, connectives) live in
// LanguageRules; English and French are registered by default.

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "taskdraft/kb.hpp"
#include "taskdraft/lexicon.hpp"
#include "taskdraft/planner.hpp"

namespace taskdraft::realizer {

struct NounPhrase {
  enum class Determiner { definite, indefinite, none };
  Determiner determiner = Determiner::definite;
  std::string head;
  Gender gender = Gender::none;
  std::vector<NounPhrase> owner;  // zero or one: "the folder of the document"
};

/// One action's participants, already turned into noun phrases.
struct Clause {
  const LexEntry* verb = nullptr;
  std::string process;
  std::string language;
  NounPhrase actor;
  std::optional<NounPhrase> actee;
  std::optional<NounPhrase> source;
  std::optional<NounPhrase> location;

  /// The verb form or Error("missing-lexeme", "<process> <language> <form>").
  const std::string& form(std::string_view name) const;
};

class LanguageRules {
 public:
  virtual ~LanguageRules() = default;

  virtual std::string_view code() const = 0;

  /// Combine a UI label with its kind noun ("Save" + "button").
  virtual std::string compose(const std::string& label, const std::string& noun) const = 0;
  virtual std::string noun_phrase(const NounPhrase& np) const = 0;

  virtual std::string title(const Clause& c) const = 0;
  virtual std::string instruction(const Clause& c) const = 0;
  virtual std::string result(const Clause& c) const = 0;
  virtual std::string cancellation(const Clause& goal, const std::vector<Clause>& methods,
                                   kb::Decomposition mode) const = 0;
  virtual std::string warning(const Clause& c) const = 0;

  virtual std::string_view alternative_marker() const = 0;
  virtual std::string_view warning_marker() const = 0;
};

/// Rules for a language code; throws Error("unknown-language").
const LanguageRules& rules_for(std::string_view code);
void register_language(std::unique_ptr<LanguageRules> rules);

struct Options {
  bool accented = false;  // use `alt=` spellings where the lexicon has them
};

/// A span of `text` (bytes, end exclusive) and the node it expresses.
/// Numbering, indentation and markers are outside every span.
struct Span {
  std::size_t start = 0;
  std::size_t end = 0;
  std::string node;
  std::string kind;  // title, step, alternative, result, note, warning-note

  bool operator==(const Span&) const = default;
};

struct RenderedDoc {
  std::string language;
  std::string text;
  std::vector<Span> provenance;
};

/// Throws Error("missing-lexeme", "<concept> <language> <form>") when a word
/// is absent and Error("unfilled-slot", id) for an action with an open actee.
RenderedDoc realize_document(const planner::DocPlan& plan, const kb::TaskModel& model, const Lexicon& lexicon,
                             const Options& options = {});

/// Text of one leaf act (title, step without alternatives, result, note or
/// warning-note) without numbering or markers.
std::string realize_act(const planner::DiscourseAct& act, const kb::TaskModel& model, const Lexicon& lexicon,
                        const Options& options = {});

/// Sidecar format, one span per line:
///   taskdraft-provenance 1 <language>
///   <start> <end> <kind> <node>
std::string serialize_provenance(const RenderedDoc& doc);
std::vector<Span> parse_provenance(std::string_view text);

/// Upper-cases the first letter, including two-byte Latin letters in UTF-8.
std::string capitalize(std::string s);

}  // namespace taskdraft::realizer
