#pragma once

#include <filesystem>
#include <string>

#include "taskdraft/kb.hpp"
#include "taskdraft/pipeline.hpp"
#include "taskdraft/script.hpp"
#include "taskdraft/uispec.hpp"

namespace td_test {

inline std::filesystem::path data_dir() { return TASKDRAFT_DATA_DIR; }

inline std::string data(const std::string& name) { return taskdraft::read_file(data_dir() / name); }

inline const taskdraft::Resources& resources() {
  static const taskdraft::Resources r = taskdraft::bundled_resources();
  return r;
}

/// word.uispec run through the bundled rules: ontology plus 7 derived actions.
inline taskdraft::kb::TaskModel derived_model() {
  const auto& r = resources();
  return taskdraft::uispec::ingest(taskdraft::uispec::parse_uispec(data("word.uispec")), r.rules, r.ontology);
}

/// The complete save-a-document model: derived model plus save.author.
inline taskdraft::kb::TaskModel save_model() {
  return taskdraft::script::apply_script(derived_model(), resources().grammar,
                                         taskdraft::script::parse_script(data("save.author")));
}

/// Ontology plus a UI spec given inline.
inline taskdraft::kb::TaskModel ingest_text(const std::string& spec) {
  const auto& r = resources();
  return taskdraft::uispec::ingest(taskdraft::uispec::parse_uispec(spec), r.rules, r.ontology);
}

struct SeededViolation {
  std::string code;
  taskdraft::kb::TaskModel model;
};

/// The save model with one violation planted per case, built with the raw
/// insert calls since link() refuses most of them.
inline std::vector<SeededViolation> seeded_violations() {
  using namespace taskdraft::kb;
  std::vector<SeededViolation> out;

  TaskModel cycle = derived_model();
  cycle.insert_plan({"p1", Decomposition::sequence, ""});
  cycle.insert_plan({"p2", Decomposition::sequence, ""});
  cycle.insert_edge({RelationKind::goal, "p1", "choose-save-button", std::nullopt});
  cycle.insert_edge({RelationKind::sub_action, "p1", "choose-cancel-button", 1});
  cycle.insert_edge({RelationKind::goal, "p2", "choose-cancel-button", std::nullopt});
  cycle.insert_edge({RelationKind::sub_action, "p2", "choose-save-button", 1});
  out.push_back({"cycle", std::move(cycle)});

  TaskModel dup = save_model();
  dup.insert_edge({RelationKind::goal, "cancel-plan", "open-folder", std::nullopt});
  out.push_back({"duplicate-goal", std::move(dup)});

  TaskModel single = derived_model();
  single.insert_plan({"either", Decomposition::choice, ""});
  single.insert_edge({RelationKind::goal, "either", "open-save-as", std::nullopt});
  single.insert_edge({RelationKind::sub_action, "either", "click-save-icon", std::nullopt});
  out.push_back({"needs-2-alternatives", std::move(single)});

  TaskModel dangling = save_model();
  ActionNode ghost;
  ghost.id = "click-ghost";
  ghost.origin = Origin::authored;
  ghost.complex.process = "click";
  ghost.complex.actee = "ghost-icon";
  dangling.insert_action(ghost);
  out.push_back({"dangling-filler", std::move(dangling)});

  TaskModel collide = save_model();
  collide.insert_edge({RelationKind::sub_action, "cancel-plan", "open-folder", 1});
  out.push_back({"order-collision", std::move(collide)});
  return out;
}

template <class F>
std::string error_code(F&& f) {
  try {
    f();
  } catch (const taskdraft::Error& e) {
    return e.code();
  }
  return "no error";
}

}  // namespace td_test
