#include <doctest.h>

#include "support.hpp"
#include "taskdraft/error.hpp"
#include "taskdraft/kb_io.hpp"
#include "taskdraft/records.hpp"

using namespace taskdraft;
using td_test::error_code;

TEST_CASE("tokenizer handles quotes, fields, comments and braces") {
  auto lines = text::tokenize_lines("a \"b c\" k=v q=\"x \\\"y\\\"\" # note\n\n{ d }\n");
  REQUIRE(lines.size() == 2);
  REQUIRE(lines[0].size() == 4);
  CHECK(lines[0][1].text == "b c");
  CHECK(lines[0][2].kind == text::Token::Kind::field);
  CHECK(lines[0][2].value == "v");
  CHECK(lines[0][3].value == "x \"y\"");
  CHECK(lines[1][0].kind == text::Token::Kind::open_brace);
  CHECK(lines[1][0].line == 3);
}

TEST_CASE("record files report line numbers") {
  try {
    text::tokenize_lines("ok\nbad \"unterminated\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(e.code() == "parse-error");
  }
  CHECK(error_code([] { text::read_record_file("", "magic", 1); }) == "parse-error");
  CHECK(error_code([] { text::read_record_file("magic 2\n", "magic", 1); }) == "parse-error");
  CHECK(error_code([] { text::read_record_file("other 1\n", "magic", 1); }) == "parse-error");
  auto f = text::read_record_file("magic 1 extra\nrec a b=c\n", "magic", 1);
  CHECK(f.header_args == std::vector<std::string>{"extra"});
  CHECK(f.records.at(0).field("b") == std::optional<std::string>("c"));
}

TEST_CASE("quote and bare_or_quoted") {
  CHECK(text::quote("a \"b\"\n") == "\"a \\\"b\\\"\\n\"");
  CHECK(text::bare_or_quoted("plain-word") == "plain-word");
  CHECK(text::bare_or_quoted("two words") == "\"two words\"");
  CHECK(text::bare_or_quoted("") == "\"\"");
}

TEST_CASE("KB files round-trip byte-identically") {
  kb::TaskModel m = td_test::save_model();
  std::string text = kb::serialize(m);
  CHECK(text.rfind("taskdraft-kb 1\n", 0) == 0);
  kb::TaskModel back = kb::parse_kb(text);
  CHECK(kb::serialize(back) == text);
  CHECK(back.actions().size() == m.actions().size());
  CHECK(back.edges() == m.edges());
  CHECK(kb::validate(back).empty());
}

TEST_CASE("open text slots survive serialization") {
  kb::TaskModel m = td_test::ingest_text(
      "uispec 1\napplication app \"App\" { dialog d \"Find\" { text-field f \"Search For\" } }\n");
  const kb::ActionNode* type = m.find_action("type-search-for-field");
  REQUIRE(type);
  CHECK(type->complex.actee_open);
  std::string text = kb::serialize(m);
  CHECK(text.find("actee=?") != std::string::npos);
  kb::TaskModel back = kb::parse_kb(text);
  CHECK(back.find_action("type-search-for-field")->complex.actee_open);
  CHECK(kb::serialize(back) == text);
}

TEST_CASE("KB parse errors") {
  CHECK(error_code([] { kb::parse_kb("taskdraft-kb 1\nconcept x layer=sideways label=\"x\"\n"); }) == "parse-error");
  CHECK(error_code([] { kb::parse_kb("taskdraft-kb 1\nwidget x\n"); }) == "parse-error");
  CHECK(error_code([] { kb::parse_kb("taskdraft-kb 9\n"); }) == "parse-error");
  CHECK(error_code([] { kb::parse_kb("taskdraft-kb 1\nedge goal a b order=x\n"); }) == "parse-error");
  // Semantic problems are left to validate().
  kb::TaskModel m = kb::parse_kb("taskdraft-kb 1\nedge goal a b\n");
  CHECK(kb::validate(m).size() == 2);
}

TEST_CASE("identical call sequences serialize identically") {
  auto build = [] {
    kb::TaskModel m = td_test::derived_model();
    kb::ActionComplex c;
    c.process = "save";
    c.actee = "current-document";
    auto id = m.add_action(c, kb::Origin::authored).id;
    auto p = m.add_plan(kb::Decomposition::sequence, "p", "P");
    m.link(kb::RelationKind::goal, p, id);
    m.link(kb::RelationKind::sub_action, p, "choose-save-button");
    return kb::serialize(m);
  };
  CHECK(build() == build());
}
