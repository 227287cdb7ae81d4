#pragma once

// KB file format (UTF-8, one record per line, fields in fixed order):
//
//   taskdraft-kb 1
//   concept <id> layer=<layer> [parent=<id>] label="<text>"
//   instance <id> concept=<id> origin=<origin> label="<text>" [widget=<id>] [generic]
//   action <id> origin=<origin> process=<id> actor=<id> [actee=<id>|actee=?] [location=<id>] [source=<id>] [means=<id>]
//   plan <id> mode=<sequence|choice> [label="<text>"]
//   edge <kind> <from> <to> [order=<n>]
//
// Records keep insertion order, so serialize(parse(text)) == text for any
// file this writer produced.

#include <string>
#include <string_view>

#include "taskdraft/kb.hpp"

namespace taskdraft::kb {

std::string serialize(const TaskModel& model);

/// Reads a KB file. Syntax errors throw ParseError; semantic problems are
/// left for validate().
TaskModel parse_kb(std::string_view text);

/// Appends the records of `text` (a KB file) to `model`.
void merge_kb(TaskModel& model, std::string_view text);

}  // namespace taskdraft::kb
