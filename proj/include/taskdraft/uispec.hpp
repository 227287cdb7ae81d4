#pragma once

// Declarative UI specifications and the derivation of interface instances and
// primitive actions from them.
//
// .uispec grammar (UTF-8, whitespace-insensitive):
//
//   file    := "uispec" <version> element
//   element := <kind> <id> "<label>" (key=value)* [ "{" element* "}" ]
//   kind    := application | window | dialog | menu | menu-item | button
//            | icon-button | text-field | list
//
// The root must be an application. text-field accepts content=<instance id>
// naming what the user types into it.

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "taskdraft/kb.hpp"

namespace taskdraft::uispec {

enum class WidgetKind { application, window, dialog, menu, menu_item, button, icon_button, text_field, list };

std::string_view to_string(WidgetKind);
std::optional<WidgetKind> parse_widget_kind(std::string_view);

struct WidgetSpec {
  std::string id;
  WidgetKind kind = WidgetKind::application;
  std::string label;
  std::optional<std::string> content;  // text-field only
  std::vector<WidgetSpec> children;
  std::size_t line = 0;
};

/// Whether `child` may appear directly inside `parent`.
bool may_contain(WidgetKind parent, WidgetKind child);

/// Parses the native .uispec format. Throws ParseError,
/// Error("illegal-nesting") or Error("duplicate-id").
WidgetSpec parse_uispec(std::string_view text);

/// Plug-in point for other UI description formats.
class Importer {
 public:
  virtual ~Importer() = default;
  virtual std::string_view name() const = 0;
  virtual WidgetSpec import(std::string_view text) const = 0;
};

class NativeImporter final : public Importer {
 public:
  std::string_view name() const override { return "uispec"; }
  WidgetSpec import(std::string_view text) const override { return parse_uispec(text); }
};

// ---------------------------------------------------------------------------
// Derivation rules
//
//   taskdraft-rules 1
//   rule <widget-kind> <process-concept> (<role>=self|parent|content)*

enum class Binding { self, parent, content };

struct DerivationRule {
  WidgetKind kind = WidgetKind::button;
  std::string process;
  std::vector<std::pair<kb::Role, Binding>> roles;
};

using RuleTable = std::vector<DerivationRule>;

RuleTable parse_rules(std::string_view text);

struct Derivation {
  std::vector<kb::Instance> agents;   // the application itself
  std::vector<kb::Instance> objects;  // every other widget
  std::vector<kb::ActionNode> actions;
};

/// Derives instances and origin=derived actions by a pre-order walk. Pure:
/// `ontology` is only read for concept checks and id collisions. Throws
/// Error("unknown-rule-concept") when a rule's process is not an
/// interface-layer action concept.
Derivation derive_instances(const WidgetSpec& tree, const RuleTable& rules, const kb::TaskModel& ontology);

/// `ontology` plus the derivation's instances and actions.
kb::TaskModel ingest(const WidgetSpec& tree, const RuleTable& rules, const kb::TaskModel& ontology);

}  // namespace taskdraft::uispec
