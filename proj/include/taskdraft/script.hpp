#pragma once

// Author scripts: the authoring operations as a replayable text file.
//
//   taskdraft-author 1
//   action <cnl sentence>                 add an authored action
//   plan <sequence|choice> [<name>] ["<label>"]
//   link <kind> <from> <to> [order=<n>]

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "taskdraft/cnl.hpp"
#include "taskdraft/error.hpp"
#include "taskdraft/kb.hpp"

namespace taskdraft::script {

struct AddAction {
  std::string sentence;
};

struct AddPlan {
  kb::Decomposition mode = kb::Decomposition::sequence;
  std::string name;
  std::string label;
};

struct Link {
  kb::RelationKind kind = kb::RelationKind::goal;
  std::string from;
  std::string to;
  std::optional<int> order;
};

using Command = std::variant<AddAction, AddPlan, Link>;

struct AuthorScript {
  std::vector<Command> commands;
};

AuthorScript parse_script(std::string_view text);
std::string format_command(const Command& command);
std::string serialize(const AuthorScript& script);

struct CommandResult {
  std::string id;          // node created (or found, for duplicate actions)
  bool duplicate = false;  // identical action already present; model unchanged
};

/// Applies one command in place. Domain errors propagate unchanged; on error
/// the model is not modified.
CommandResult apply_command(kb::TaskModel& model, const cnl::Grammar& grammar, const Command& command);

/// Failure of command `index` (1-based) inside a script.
class ScriptError : public Error {
 public:
  ScriptError(std::size_t index, const Error& cause)
      : Error(cause.code(), "command " + std::to_string(index) + ": " + cause.detail()), index_(index) {}
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

/// Applies every command to a copy of `model`; the copy is returned only if
/// all succeed. Throws ScriptError otherwise.
kb::TaskModel apply_script(const kb::TaskModel& model, const cnl::Grammar& grammar, const AuthorScript& script);

}  // namespace taskdraft::script
