#pragma once

// Controlled natural language for specifying action complexes.
//
// A pattern is a sequence of words and bracketed slots. A slot "[c]" (or
// "[role:c]") stands for anything of concept c: it expands to the slots of
// c's sub-concepts, the words of c's instances, and, for action concepts, the
// grammar frames of that process.
//
// Grammar file:
//
//   taskdraft-grammar 1
//   frame <process> [actor=<instance>] "<pattern>"
//
// Frame slots are named by the role they fill (actor, actee, location,
// source). An instance is written as its id with hyphens read as spaces
// ("current-document" -> "current document").

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "taskdraft/kb.hpp"

namespace taskdraft::cnl {

struct Slot {
  std::string name;
  std::string concept_id;

  bool operator==(const Slot&) const = default;
};

using PatternToken = std::variant<std::string, Slot>;

struct Pattern {
  std::vector<PatternToken> tokens;

  bool ground() const;
  std::size_t slot_count() const;
  /// Display form: words as-is, slots as "[concept]".
  std::string surface() const;

  bool operator==(const Pattern&) const = default;
};

/// Parses "reader save [information]" or "[actee:information]". Throws
/// Error("unknown-concept") when a slot names no concept in `model`.
Pattern parse_pattern(std::string_view text, const kb::TaskModel& model);

struct Frame {
  std::string process;
  std::optional<std::string> actor;  // fixed actor, e.g. reader
  Pattern rhs;
  std::size_t line = 0;
};

struct Grammar {
  std::vector<Frame> frames;
};

Grammar parse_grammar(std::string_view text);

struct GroundSentence {
  std::vector<std::string> words;
  std::optional<kb::ActionComplex> complex;  // set when the words form a whole action sentence

  std::string text() const;
};

std::vector<std::string> instance_words(std::string_view instance_id);

/// Grammar engine bound to one (grammar, model) pair; both must outlive it
/// and stay unchanged while it is used.
class Engine {
 public:
  Engine(const Grammar& grammar, const kb::TaskModel& model);

  /// Legal replacements for the `slot_index`-th slot (0-based among slots),
  /// sorted by surface form. Dead ends are filtered out. Throws
  /// Error("not-a-slot").
  std::vector<Pattern> expansions(const Pattern& pattern, std::size_t slot_index) const;

  /// Repeatedly takes the first expansion of the leftmost slot. Throws
  /// Error("no-ground-form").
  GroundSentence default_completion(const Pattern& pattern) const;

  /// Throws Error("not-in-grammar", position) or Error("ambiguous").
  kb::ActionComplex parse(std::string_view sentence) const;

  /// Canonical sentence for `complex`. Throws Error("unrenderable").
  std::string render(const kb::ActionComplex& complex) const;

  /// Every ground sentence reachable from `root`, one entry per derivation
  /// (so a repeated entry means an ambiguous sentence). Throws
  /// Error("too-many-sentences") past `limit`.
  std::vector<std::string> enumerate(const Pattern& root, std::size_t limit = 100000) const;

  bool live(std::string_view concept_id) const;

 private:
  bool pattern_live(const Pattern& p) const;
  void compute_liveness();

  const Grammar& grammar_;
  const kb::TaskModel& model_;
  std::vector<std::string> live_;  // sorted
};

}  // namespace taskdraft::cnl
