#include <doctest.h>

#include <algorithm>
#include <deque>
#include <map>
#include <set>

#include "random_models.hpp"
#include "support.hpp"
#include "taskdraft/cnl.hpp"
#include "taskdraft/error.hpp"

using namespace taskdraft;
using namespace taskdraft::cnl;
using td_test::error_code;

namespace {

std::vector<std::string> surfaces(const std::vector<Pattern>& ps) {
  std::vector<std::string> out;
  for (const auto& p : ps) out.push_back(p.surface());
  return out;
}

struct Fixture {
  kb::TaskModel model = td_test::save_model();
  const Grammar& grammar = td_test::resources().grammar;
  Engine engine{grammar, model};

  Pattern pat(const std::string& s) const { return parse_pattern(s, model); }
};

}  // namespace

TEST_CASE("patterns") {
  Fixture f;
  Pattern p = f.pat("reader save [information]");
  CHECK(p.slot_count() == 1);
  CHECK_FALSE(p.ground());
  CHECK(p.surface() == "reader save [information]");
  CHECK(f.pat("reader save [actee:information]").surface() == "reader save [information]");
  CHECK(f.pat("reader save current document").ground());
  CHECK(error_code([&] { f.pat("reader save [gizmo]"); }) == "unknown-concept");
  CHECK(instance_words("current-document") == std::vector<std::string>{"current", "document"});
}

TEST_CASE("expansions of [information]") {
  Fixture f;
  auto list = surfaces(f.engine.expansions(f.pat("reader save [information]"), 0));
  CHECK(std::find(list.begin(), list.end(), "reader save [document]") != list.end());
  CHECK(list == std::vector<std::string>{"reader save [document]", "reader save [name]"});
  CHECK(std::is_sorted(list.begin(), list.end()));
}

TEST_CASE("a leaf concept with one instance has exactly one expansion") {
  // document has no sub-concepts, no frames, and one instance.
  Fixture f;
  auto list = surfaces(f.engine.expansions(f.pat("reader save [document]"), 0));
  CHECK(list == std::vector<std::string>{"reader save current document"});
}

TEST_CASE("slot indexes count slots only") {
  Fixture f;
  Pattern p = f.pat("reader type [name] in [text-field]");
  auto second = surfaces(f.engine.expansions(p, 1));
  CHECK(second == std::vector<std::string>{"reader type [name] in save current document as field"});
  CHECK(error_code([&] { f.engine.expansions(p, 2); }) == "not-a-slot");
  CHECK(error_code([&] { f.engine.expansions(f.pat("reader save current document"), 0); }) == "not-a-slot");
}

TEST_CASE("action slots expand to frames and finer processes") {
  Fixture f;
  auto list = surfaces(f.engine.expansions(f.pat("[user-action]"), 0));
  CHECK(list == std::vector<std::string>{"[choose]", "[click]", "[open]", "[quit]", "[save]", "[type]"});
  CHECK(surfaces(f.engine.expansions(f.pat("[save]"), 0)) == std::vector<std::string>{"reader save [information]"});
  CHECK(surfaces(f.engine.expansions(f.pat("[click]"), 0)) == std::vector<std::string>{"reader click [icon-button]"});
  CHECK(surfaces(f.engine.expansions(f.pat("[choose]"), 0)) ==
        std::vector<std::string>{"reader choose [button]", "reader choose [menu-item] from [menu]"});
}

TEST_CASE("dead ends are filtered") {
  Fixture f;
  // quality has nothing under it and no instances.
  CHECK_FALSE(f.engine.live("quality"));
  CHECK(f.engine.live("document"));
  auto list = surfaces(f.engine.expansions(f.pat("[thing]"), 0));
  CHECK(std::find(list.begin(), list.end(), "[quality]") == list.end());
}

TEST_CASE("default completion") {
  Fixture f;
  GroundSentence s = f.engine.default_completion(f.pat("reader save [information]"));
  CHECK(s.text() == "reader save current document");
  REQUIRE(s.complex);
  CHECK(s.complex->actee == std::optional<std::string>("current-document"));

  CHECK(f.engine.default_completion(f.pat("reader open folder")).text() == "reader open folder");
  CHECK(error_code([&] { f.engine.default_completion(f.pat("reader save [quality]")); }) == "no-ground-form");
}

TEST_CASE("parse") {
  Fixture f;
  kb::ActionComplex c = f.engine.parse("reader save current document");
  CHECK(c.process == "save");
  CHECK(c.actor == "reader");
  CHECK(c.actee == std::optional<std::string>("current-document"));
  CHECK_FALSE(c.location);

  kb::ActionComplex choose = f.engine.parse("reader choose save option from file menu");
  CHECK(choose.source == std::optional<std::string>("file-menu"));

  kb::ActionComplex display = f.engine.parse("word display save as");
  CHECK(display.actor == "word");
  CHECK(display.process == "display");

  try {
    f.engine.parse("reader frobnicate document");
    FAIL("expected not-in-grammar");
  } catch (const Error& e) {
    CHECK(e.code() == "not-in-grammar");
    CHECK(e.detail().find("1") != std::string::npos);  // fails at the second word
  }
  CHECK(error_code([&] { f.engine.parse("reader save current"); }) == "not-in-grammar");
  CHECK(error_code([&] { f.engine.parse("reader save current document now"); }) == "not-in-grammar");
  CHECK(error_code([&] { f.engine.parse(""); }) == "not-in-grammar");
}

TEST_CASE("ambiguous grammars are reported") {
  Fixture f;
  Grammar twice = f.grammar;
  twice.frames.push_back(twice.frames.front());
  Engine e(twice, f.model);
  CHECK(error_code([&] { e.parse("reader choose save button"); }) == "ambiguous");
}

TEST_CASE("render") {
  Fixture f;
  kb::ActionComplex save;
  save.process = "save";
  save.actee = "current-document";
  CHECK(f.engine.render(save) == "reader save current document");

  kb::ActionComplex click;
  click.process = "click";
  click.actee = "save-icon";
  CHECK(f.engine.render(click) == "reader click save icon");

  kb::ActionComplex vague;
  vague.process = "user-action";
  CHECK(error_code([&] { f.engine.render(vague); }) == "unrenderable");
}

TEST_CASE("grammar files") {
  CHECK(error_code([] { parse_grammar("taskdraft-grammar 1\nframe save \"reader save [actee:information]\"\n"); }) ==
        "parse-error");
  CHECK(error_code([] { parse_grammar("taskdraft-grammar 1\nrule save actor=reader \"x\"\n"); }) == "parse-error");
  CHECK(td_test::resources().grammar.frames.size() == 9);
}

TEST_CASE("exhaustive: every ground sentence round-trips and parses once") {
  Fixture f;
  auto sentences = f.engine.enumerate(f.pat("[action]"));
  REQUIRE_FALSE(sentences.empty());
  std::map<std::string, int> seen;
  for (const auto& s : sentences) ++seen[s];
  for (const auto& [s, n] : seen) {
    CHECK_MESSAGE(n == 1, s);
    kb::ActionComplex c = f.engine.parse(s);
    CHECK(f.engine.render(c) == s);
  }
  for (const auto& a : f.model.actions()) {
    CHECK(f.engine.parse(f.engine.render(a.complex)) == a.complex);
  }
}

TEST_CASE("exhaustive: no reachable pattern is a dead end") {
  Fixture f;
  std::deque<Pattern> todo{f.pat("[action]")};
  std::set<std::string> visited;
  while (!todo.empty()) {
    Pattern p = todo.front();
    todo.pop_front();
    if (!visited.insert(p.surface()).second) continue;
    CHECK_NOTHROW(f.engine.default_completion(p));
    for (std::size_t i = 0; i < p.slot_count(); ++i) {
      for (auto& e : f.engine.expansions(p, i)) todo.push_back(std::move(e));
    }
  }
  CHECK(visited.size() > 20);
}

TEST_CASE("property: random models keep the grammar unambiguous") {
  for (unsigned seed = 1; seed <= 25; ++seed) {
    kb::TaskModel m = td_test::random_task_model(seed).model;
    Engine e(td_test::resources().grammar, m);
    auto sentences = e.enumerate(parse_pattern("[action]", m));
    std::set<std::string> unique(sentences.begin(), sentences.end());
    CHECK(unique.size() == sentences.size());
    for (const auto& a : m.actions()) CHECK(e.parse(e.render(a.complex)) == a.complex);
  }
}
