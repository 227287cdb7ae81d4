#pragma once

// Text planning: turns a goal and its decomposition into a language-neutral
// tree of discourse acts. Acts only reference nodes; no words live here.

#include <string>
#include <string_view>
#include <vector>

#include "taskdraft/kb.hpp"

namespace taskdraft::planner {

enum class ActKind { document, title, step_sequence, step, alternative_group, result, note, warning_note };

std::string_view to_string(ActKind);

struct DiscourseAct {
  ActKind kind = ActKind::document;
  std::string source;  // node the act expresses
  // Notes about a cancellation also name the method that achieves it.
  std::vector<std::string> via;
  kb::Decomposition via_mode = kb::Decomposition::sequence;
  std::vector<DiscourseAct> children;

  bool operator==(const DiscourseAct&) const = default;
};

struct DocPlan {
  DiscourseAct root;
  std::vector<std::string> diagnostics;

  const DiscourseAct& title() const { return root.children.at(0); }
  const DiscourseAct& steps() const { return root.children.at(1); }

  bool operator==(const DocPlan&) const = default;
};

/// Instructions for achieving `goal`. Requires a valid model and a plan whose
/// goal is `goal`. Throws Error("unknown-node"), Error("invalid-model"),
/// Error("no-plan-for-goal") or Error("unfilled-slot").
DocPlan plan_document(const kb::TaskModel& model, std::string_view goal);

/// Same layout rooted at any action. An action without a plan yields a title,
/// an empty step sequence and a diagnostic instead of an error.
DocPlan plan_fragment(const kb::TaskModel& model, std::string_view action);

/// Indented, versioned text form:
///
///   taskdraft-docplan 1
///   document <id>
///     title <id>
///     step-sequence <id>
///       step <id>
///   ...
///   diagnostic "<text>"
std::string serialize(const DocPlan& plan);

/// Every node id the plan references (sources and methods), in document order.
std::vector<std::string> referenced_nodes(const DocPlan& plan);

}  // namespace taskdraft::planner
