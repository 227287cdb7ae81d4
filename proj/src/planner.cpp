#include "taskdraft/planner.hpp"

#include "taskdraft/error.hpp"
#include "taskdraft/records.hpp"

namespace taskdraft::planner {

namespace {

using kb::Decomposition;
using kb::RelationKind;

DiscourseAct act(ActKind kind, std::string source) {
  DiscourseAct a;
  a.kind = kind;
  a.source = std::move(source);
  return a;
}

class Builder {
 public:
  explicit Builder(const kb::TaskModel& model) : model_(model) {}

  DocPlan build(const std::string& goal) {
    DocPlan plan;
    plan.root = act(ActKind::document, goal);
    plan.root.children.push_back(act(ActKind::title, goal));
    DiscourseAct steps = act(ActKind::step_sequence, goal);

    auto achiever = model_.achiever_of(goal);
    if (!achiever) {
      plan.diagnostics.push_back(goal + " has no plan; only its title can be drafted");
      plan.root.children.push_back(std::move(steps));
      return plan;
    }
    const kb::PlanNode* p = model_.find_plan(*achiever);

    // Preconditions first, then the plan's own sub-actions.
    for (const auto* e : model_.outgoing(p->id, RelationKind::precondition)) {
      steps.children.push_back(step(e->to, true));
    }
    if (p->mode == Decomposition::choice) {
      // The goal itself is reached one way or another: a single step.
      steps.children.push_back(step(goal, true));
    } else {
      for (const auto* e : model_.outgoing(p->id, RelationKind::sub_action)) {
        steps.children.push_back(step(e->to, false));
      }
    }
    plan.root.children.push_back(std::move(steps));

    // Trailing notes: warnings, then cancellations.
    for (const auto* e : model_.outgoing(p->id, RelationKind::warning)) {
      plan.root.children.push_back(act(ActKind::warning_note, e->to));
    }
    for (const auto* e : model_.outgoing(p->id, RelationKind::cancellation)) {
      DiscourseAct note = act(ActKind::note, e->to);
      if (auto method = model_.achiever_of(e->to)) {
        const kb::PlanNode* mp = model_.find_plan(*method);
        note.via_mode = mp->mode;
        for (const auto* s : model_.outgoing(mp->id, RelationKind::sub_action)) note.via.push_back(s->to);
      }
      plan.root.children.push_back(std::move(note));
    }
    return plan;
  }

 private:
  DiscourseAct step(const std::string& action, bool expand_choice) {
    DiscourseAct s = act(ActKind::step, action);
    if (expand_choice) {
      if (auto achiever = model_.achiever_of(action)) {
        const kb::PlanNode* p = model_.find_plan(*achiever);
        auto alternatives = model_.outgoing(p->id, RelationKind::sub_action);
        if (p->mode == Decomposition::choice && alternatives.size() >= 2) {
          DiscourseAct group = act(ActKind::alternative_group, action);
          for (const auto* e : alternatives) group.children.push_back(act(ActKind::step, e->to));
          s.children.push_back(std::move(group));
        }
      }
    }
    for (const auto* e : model_.outgoing(action, RelationKind::side_effect)) {
      s.children.push_back(act(ActKind::result, e->to));
    }
    return s;
  }

  const kb::TaskModel& model_;
};

void collect(const DiscourseAct& a, std::vector<std::string>& out) {
  if (a.kind != ActKind::document && a.kind != ActKind::step_sequence && a.kind != ActKind::alternative_group) {
    out.push_back(a.source);
  }
  for (const auto& v : a.via) out.push_back(v);
  for (const auto& c : a.children) collect(c, out);
}

std::vector<std::string> open_slots(const kb::TaskModel& model, const DocPlan& plan) {
  std::vector<std::string> out;
  for (const auto& id : referenced_nodes(plan)) {
    const kb::ActionNode* a = model.find_action(id);
    if (a && a->complex.actee_open) out.push_back(id);
  }
  return out;
}

void write_act(std::string& out, const DiscourseAct& a, int depth) {
  out.append(static_cast<std::size_t>(depth) * 2, ' ');
  out += std::string(to_string(a.kind)) + " " + a.source;
  if (!a.via.empty()) {
    out += " via=";
    for (std::size_t i = 0; i < a.via.size(); ++i) out += (i ? "," : "") + a.via[i];
    out += " mode=" + std::string(kb::to_string(a.via_mode));
  }
  out += "\n";
  for (const auto& c : a.children) write_act(out, c, depth + 1);
}

}  // namespace

std::string_view to_string(ActKind kind) {
  switch (kind) {
    case ActKind::document: return "document";
    case ActKind::title: return "title";
    case ActKind::step_sequence: return "step-sequence";
    case ActKind::step: return "step";
    case ActKind::alternative_group: return "alternative-group";
    case ActKind::result: return "result";
    case ActKind::note: return "note";
    case ActKind::warning_note: return "warning-note";
  }
  return "?";
}

DocPlan plan_document(const kb::TaskModel& model, std::string_view goal) {
  if (!model.find_action(goal)) throw Error("unknown-node", std::string(goal));
  auto violations = kb::validate(model);
  if (!violations.empty()) {
    throw Error("invalid-model", std::to_string(violations.size()) + " violation(s), first: " +
                                     kb::format_violation(violations.front()));
  }
  if (!model.achiever_of(goal)) throw Error("no-plan-for-goal", std::string(goal));

  DocPlan plan = Builder(model).build(std::string(goal));
  if (auto open = open_slots(model, plan); !open.empty()) throw Error("unfilled-slot", open.front());
  return plan;
}

DocPlan plan_fragment(const kb::TaskModel& model, std::string_view action) {
  if (!model.find_action(action)) throw Error("unknown-node", std::string(action));
  DocPlan plan = Builder(model).build(std::string(action));
  for (const auto& id : open_slots(model, plan)) plan.diagnostics.push_back(id + " has an unfilled text slot");
  return plan;
}

std::string serialize(const DocPlan& plan) {
  std::string out = "taskdraft-docplan 1\n";
  write_act(out, plan.root, 0);
  for (const auto& d : plan.diagnostics) out += "diagnostic " + text::quote(d) + "\n";
  return out;
}

std::vector<std::string> referenced_nodes(const DocPlan& plan) {
  std::vector<std::string> out;
  collect(plan.root, out);
  return out;
}

}  // namespace taskdraft::planner
