#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "random_models.hpp"
#include "support.hpp"
#include "taskdraft/error.hpp"
#include "taskdraft/planner.hpp"

using namespace taskdraft;
using namespace taskdraft::planner;
using td_test::error_code;

namespace {

DiscourseAct leaf(ActKind kind, std::string source, std::vector<DiscourseAct> children = {}) {
  DiscourseAct a;
  a.kind = kind;
  a.source = std::move(source);
  a.children = std::move(children);
  return a;
}

// Same graph content, every list inserted in a different order.
kb::TaskModel reordered(const kb::TaskModel& m, unsigned seed) {
  std::mt19937 rng(seed);
  kb::TaskModel out;
  for (const auto& c : m.concepts()) out.add_concept(c);
  for (const auto& i : m.instances()) out.add_instance(i);
  auto actions = m.actions();
  auto plans = m.plans();
  auto edges = m.edges();
  std::shuffle(actions.begin(), actions.end(), rng);
  std::shuffle(plans.begin(), plans.end(), rng);
  std::shuffle(edges.begin(), edges.end(), rng);
  for (auto& a : actions) out.insert_action(std::move(a));
  for (auto& p : plans) out.insert_plan(std::move(p));
  for (auto& e : edges) out.insert_edge(std::move(e));
  return out;
}

std::size_t count_kind(const DiscourseAct& a, ActKind kind) {
  std::size_t n = a.kind == kind ? 1 : 0;
  for (const auto& c : a.children) n += count_kind(c, kind);
  return n;
}

}  // namespace

TEST_CASE("the save-a-document plan") {
  kb::TaskModel m = td_test::save_model();
  DocPlan p = plan_document(m, "save-a-document");
  CHECK(p.diagnostics.empty());

  DiscourseAct cancel = leaf(ActKind::note, "quit-save-as");
  cancel.via = {"choose-cancel-button"};
  DiscourseAct expected = leaf(
      ActKind::document, "save-a-document",
      {leaf(ActKind::title, "save-a-document"),
       leaf(ActKind::step_sequence, "save-a-document",
            {leaf(ActKind::step, "open-save-as",
                  {leaf(ActKind::alternative_group, "open-save-as",
                        {leaf(ActKind::step, "choose-save-option"), leaf(ActKind::step, "click-save-icon")}),
                   leaf(ActKind::result, "display-save-as")}),
             leaf(ActKind::step, "type-document-name"), leaf(ActKind::step, "open-folder"),
             leaf(ActKind::step, "choose-save-button")}),
       cancel});
  CHECK(p.root == expected);
  CHECK(p.title().source == "save-a-document");
  CHECK(p.steps().children.size() == 4);
}

TEST_CASE("serialization") {
  DocPlan p = plan_document(td_test::save_model(), "save-a-document");
  CHECK(serialize(p) ==
        "taskdraft-docplan 1\n"
        "document save-a-document\n"
        "  title save-a-document\n"
        "  step-sequence save-a-document\n"
        "    step open-save-as\n"
        "      alternative-group open-save-as\n"
        "        step choose-save-option\n"
        "        step click-save-icon\n"
        "      result display-save-as\n"
        "    step type-document-name\n"
        "    step open-folder\n"
        "    step choose-save-button\n"
        "  note quit-save-as via=choose-cancel-button mode=sequence\n");
}

TEST_CASE("a plan with one sub-action gives a title and one step") {
  kb::TaskModel m = td_test::derived_model();
  std::string p = m.add_plan(kb::Decomposition::sequence, "close");
  m.link(kb::RelationKind::goal, p, "quit-save-as");
  m.link(kb::RelationKind::sub_action, p, "choose-cancel-button");
  DocPlan d = plan_document(m, "quit-save-as");
  REQUIRE(d.root.children.size() == 2);
  REQUIRE(d.steps().children.size() == 1);
  CHECK(d.steps().children[0] == leaf(ActKind::step, "choose-cancel-button"));
}

TEST_CASE("errors") {
  kb::TaskModel m = td_test::save_model();
  CHECK(error_code([&] { plan_document(m, "open-folder"); }) == "no-plan-for-goal");
  CHECK(error_code([&] { plan_document(m, "nothing-here"); }) == "unknown-node");
  CHECK(error_code([&] { plan_fragment(m, "nothing-here"); }) == "unknown-node");

  kb::TaskModel broken = td_test::derived_model();
  broken.add_plan(kb::Decomposition::sequence, "empty");
  CHECK(error_code([&] { plan_document(broken, "open-save-as"); }) == "invalid-model");
}

TEST_CASE("an open text slot stops the document but not the fragment") {
  kb::TaskModel m = td_test::ingest_text(
      "uispec 1\napplication word \"Word\" {\n"
      "  dialog find \"Search\" { text-field q \"Name\" button go \"OK\" }\n"
      "}\n");
  REQUIRE(m.find_action("type-name-field"));
  std::string p = m.add_plan(kb::Decomposition::sequence, "search");
  m.link(kb::RelationKind::goal, p, "quit-search");
  m.link(kb::RelationKind::sub_action, p, "type-name-field", 1);
  m.link(kb::RelationKind::sub_action, p, "choose-ok-button", 2);
  CHECK(error_code([&] { plan_document(m, "quit-search"); }) == "unfilled-slot");
  DocPlan f = plan_fragment(m, "quit-search");
  CHECK(f.diagnostics == std::vector<std::string>{"type-name-field has an unfilled text slot"});
}

TEST_CASE("fragments") {
  kb::TaskModel m = td_test::save_model();

  DocPlan open = plan_fragment(m, "open-save-as");
  CHECK(open.diagnostics.empty());
  REQUIRE(open.steps().children.size() == 1);
  const DiscourseAct& step = open.steps().children[0];
  CHECK(step.source == "open-save-as");
  REQUIRE(step.children.size() == 2);
  CHECK(step.children[0].kind == ActKind::alternative_group);
  CHECK(step.children[0].children.size() == 2);
  CHECK(step.children[1] == leaf(ActKind::result, "display-save-as"));
  CHECK(open.root.children.size() == 2);

  DocPlan leaf_plan = plan_fragment(m, "choose-save-button");
  CHECK(leaf_plan.root.children.size() == 2);
  CHECK(leaf_plan.steps().children.empty());
  CHECK(leaf_plan.diagnostics.size() == 1);

  CHECK(plan_fragment(m, "save-a-document") == plan_document(m, "save-a-document"));
}

TEST_CASE("warnings come before cancellations") {
  kb::TaskModel m = td_test::save_model();
  m.link(kb::RelationKind::warning, "save-document-plan", "click-save-icon");
  DocPlan p = plan_document(m, "save-a-document");
  REQUIRE(p.root.children.size() == 4);
  CHECK(p.root.children[2].kind == ActKind::warning_note);
  CHECK(p.root.children[2].source == "click-save-icon");
  CHECK(p.root.children[3].kind == ActKind::note);
}

TEST_CASE("sub-actions with their own plan stay a single step") {
  kb::TaskModel m = td_test::save_model();
  kb::ActionComplex c;
  c.process = "save";
  c.actee = "document-name";
  std::string goal = m.add_action(c, kb::Origin::authored).id;
  std::string outer = m.add_plan(kb::Decomposition::sequence, "outer");
  m.link(kb::RelationKind::goal, outer, goal);
  m.link(kb::RelationKind::sub_action, outer, "save-a-document", 1);
  m.link(kb::RelationKind::sub_action, outer, "quit-save-as", 2);
  DocPlan p = plan_document(m, goal);
  REQUIRE(p.steps().children.size() == 2);
  for (const auto& s : p.steps().children) CHECK(s.children.empty());
}

TEST_CASE("property: plans depend on graph content only") {
  kb::TaskModel m = td_test::save_model();
  DocPlan base = plan_document(m, "save-a-document");
  for (unsigned seed = 1; seed <= 20; ++seed) {
    CHECK(plan_document(reordered(m, seed), "save-a-document") == base);
  }
  for (unsigned seed = 1; seed <= 40; ++seed) {
    auto r = td_test::random_task_model(seed);
    CHECK(serialize(plan_document(reordered(r.model, seed), r.goal)) == serialize(plan_document(r.model, r.goal)));
  }
}

TEST_CASE("property: step counts, references and coverage") {
  for (unsigned seed = 1; seed <= 100; ++seed) {
    auto r = td_test::random_task_model(seed);
    const kb::TaskModel& m = r.model;
    DocPlan p = plan_document(m, r.goal);
    const kb::PlanNode* plan = m.find_plan(*m.achiever_of(r.goal));
    auto pre = m.outgoing(plan->id, kb::RelationKind::precondition);
    auto subs = m.outgoing(plan->id, kb::RelationKind::sub_action);

    std::size_t expected = pre.size() + (plan->mode == kb::Decomposition::choice ? 1 : subs.size());
    CHECK(p.steps().children.size() == expected);

    for (const auto& id : referenced_nodes(p)) CHECK_MESSAGE(m.has_node(id), id);

    // The plan's own level: its steps, or the alternatives of the single
    // step a choice plan becomes.
    std::multiset<std::string> seen;
    if (plan->mode == kb::Decomposition::sequence) {
      for (std::size_t i = pre.size(); i < p.steps().children.size(); ++i) seen.insert(p.steps().children[i].source);
    } else {
      for (const auto& alt : p.steps().children.back().children.at(0).children) seen.insert(alt.source);
    }
    CHECK(seen.size() == subs.size());
    for (const auto* e : subs) CHECK(seen.count(e->to) == 1);

    CHECK(p.title().kind == ActKind::title);
    CHECK(p.steps().kind == ActKind::step_sequence);
    for (std::size_t i = 2; i < p.root.children.size(); ++i) {
      CHECK((p.root.children[i].kind == ActKind::note || p.root.children[i].kind == ActKind::warning_note));
    }
    CHECK(count_kind(p.root, ActKind::title) == 1);
  }
}
