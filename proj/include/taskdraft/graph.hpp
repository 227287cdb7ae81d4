#pragma once

// Procedural-structure export for external layout tools and the author UI.
//
// DOT: actions are ellipses (effects dashed), plans are boxes, edges carry
// the relation kind and, when set, the order. Nodes are sorted by id and
// edges by (from, kind, order, to), so output does not depend on authoring
// order.

#include <string>

#include "taskdraft/kb.hpp"

namespace taskdraft::graph {

std::string to_dot(const kb::TaskModel& model);

/// {"nodes":[{"id","type":"action"|"plan",...}],"edges":[{"kind","from","to","order"?}]}
std::string to_json(const kb::TaskModel& model);

}  // namespace taskdraft::graph
