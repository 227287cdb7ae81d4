// Acceptance run: one PASS/FAIL line per primary criterion. Exit status is
// the number of failures.

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <set>

#include "provenance_check.hpp"
#include "random_models.hpp"
#include "support.hpp"
#include "taskdraft/cnl.hpp"
#include "taskdraft/kb_io.hpp"
#include "taskdraft/planner.hpp"
#include "taskdraft/realizer.hpp"

using namespace taskdraft;
namespace fs = std::filesystem;

namespace {

std::string quote(const std::string& s) {
  std::string q = "'";
  for (char c : s) q += c == '\'' ? std::string("'\\''") : std::string(1, c);
  return q + "'";
}

int run_cli(const fs::path& dir, const std::vector<std::string>& args) {
  std::string cmd = "cd " + quote(dir.string()) + " && " + quote(TASKDRAFT_CLI);
  for (const auto& a : args) cmd += " " + quote(a);
  cmd += " >/dev/null 2>&1";
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

struct Scratch {
  fs::path dir;
  explicit Scratch(const std::string& tag) {
    dir = fs::temp_directory_path() / ("taskdraft-acceptance-" + std::to_string(::getpid()) + "-" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Scratch() { fs::remove_all(dir); }
};

std::string data_path(const char* name) { return (td_test::data_dir() / name).string(); }

// ingest, apply, draft and graph in `dir`; returns the first failing step.
std::string full_pipeline(const fs::path& dir) {
  if (run_cli(dir, {"ingest", data_path("word.uispec"), "-o", "word.kb"}) != 0) return "ingest failed";
  if (run_cli(dir, {"apply", "word.kb", data_path("save.author")}) != 0) return "apply failed";
  if (run_cli(dir, {"draft", "word.kb", "save-a-document", "--lang", "en,fr", "-o", "out"}) != 0) return "draft failed";
  if (run_cli(dir, {"graph", "word.kb", "-o", "word.dot"}) != 0) return "graph failed";
  return "";
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

Outcome golden_reproduction() {
  Scratch s("golden");
  auto start = std::chrono::steady_clock::now();
  if (run_cli(s.dir, {"ingest", data_path("word.uispec"), "-o", "word.kb"}) != 0) return {false, "ingest failed"};
  if (run_cli(s.dir, {"apply", "word.kb", data_path("save.author")}) != 0) return {false, "apply failed"};
  if (run_cli(s.dir, {"draft", "word.kb", "save-a-document", "--lang", "en,fr", "-o", "out"}) != 0) {
    return {false, "draft failed"};
  }
  double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  for (const char* lang : {"en", "fr"}) {
    std::string name = std::string("save-a-document.") + lang + ".txt";
    if (read_file(s.dir / "out" / name) != td_test::data("golden/" + name)) return {false, name + " differs"};
  }
  std::string timing = std::to_string(static_cast<int>(ms)) + " ms for ingest+apply+draft";
  return {ms < 1000.0, "en and fr byte-identical, " + timing};
}

Outcome derivation_count() {
  kb::TaskModel derived = td_test::derived_model();
  kb::TaskModel full = td_test::save_model();
  std::size_t reader = 0, from_spec = 0, effects = 0;
  for (const auto& a : full.actions()) {
    if (a.is_effect()) {
      ++effects;
      continue;
    }
    ++reader;
    if (a.origin == kb::Origin::derived) ++from_spec;
  }
  std::size_t added_goals = 0, added_other = 0;
  for (const auto& a : full.actions()) {
    if (a.is_effect() || derived.find_action(a.id)) continue;
    (full.achiever_of(a.id) ? added_goals : added_other) += 1;
  }
  std::size_t added_plans = full.plans().size() - derived.plans().size();
  bool pass = reader == 9 && from_spec == 7 && added_goals == 1 && added_other == 1 && added_plans == 3;
  return {pass, std::to_string(from_spec) + " of " + std::to_string(reader) + " actions derived; script adds " +
                    std::to_string(added_goals) + " goal action, " + std::to_string(added_other) + " other action, " +
                    std::to_string(added_plans) + " plans (plus " + std::to_string(effects) + " system effect)"};
}

// Every ground sentence of `m` parses back to itself exactly once.
void roundtrip(const kb::TaskModel& m, std::size_t& total, std::size_t& failures, std::string& first) {
  cnl::Engine engine(td_test::resources().grammar, m);
  auto sentences = engine.enumerate(cnl::parse_pattern("[action]", m));
  std::set<std::string> unique(sentences.begin(), sentences.end());
  total += sentences.size();
  for (const auto& s : sentences) {
    try {
      if (engine.render(engine.parse(s)) != s) throw Error("mismatch", s);
    } catch (const Error& e) {
      if (!failures++) first = s + " (" + e.code() + ")";
    }
  }
  if (unique.size() != sentences.size()) {
    failures += sentences.size() - unique.size();
    if (first.empty()) first = "a sentence is derivable twice";
  }
}

Outcome cnl_roundtrip() {
  std::size_t bundled = 0, random = 0, failures = 0;
  std::string first;
  roundtrip(td_test::save_model(), bundled, failures, first);
  for (unsigned seed = 1; seed <= 25; ++seed) roundtrip(td_test::random_task_model(seed).model, random, failures, first);
  std::string detail = std::to_string(bundled) + " ground sentences on the bundled model, " + std::to_string(random) +
                       " more over 25 random models, " + std::to_string(failures) + " failures";
  if (!first.empty()) detail += "; first: " + first;
  return {failures == 0 && bundled > 0 && bundled < 10000, detail};
}

Outcome graph_invariants() {
  Scratch s("validate");
  write_file(s.dir / "save.kb", kb::serialize(td_test::save_model()));
  if (!kb::validate(td_test::save_model()).empty() || run_cli(s.dir, {"validate", "save.kb"}) != 0) {
    return {false, "the save model is not reported valid"};
  }
  std::string seen;
  for (const auto& seeded : td_test::seeded_violations()) {
    bool found = false;
    for (const auto& v : kb::validate(seeded.model)) found = found || v.code == seeded.code;
    if (!found) return {false, seeded.code + " not reported"};
    write_file(s.dir / "seeded.kb", kb::serialize(seeded.model));
    if (int rc = run_cli(s.dir, {"validate", "seeded.kb"}); rc != 4) {
      return {false, seeded.code + ": validate exited " + std::to_string(rc)};
    }
    seen += (seen.empty() ? "" : ", ") + seeded.code;
  }
  return {true, seen + " each reported with exit 4; save model exits 0"};
}

Outcome structural_parallelism() {
  const auto& res = td_test::resources();
  std::size_t spans = 0;
  for (unsigned seed = 1; seed <= 100; ++seed) {
    auto r = td_test::random_task_model(seed);
    planner::DocPlan plan = planner::plan_document(r.model, r.goal);
    realizer::RenderedDoc en = realizer::realize_document(plan, r.model, res.lexicon("en"));
    realizer::RenderedDoc fr = realizer::realize_document(plan, r.model, res.lexicon("fr"));
    std::string where = "seed " + std::to_string(seed) + ": ";
    if (td_test::span_kinds(en) != td_test::span_kinds(fr)) return {false, where + "en and fr acts differ"};
    if (auto p = td_test::provenance_problem(en); !p.empty()) return {false, where + "en " + p};
    if (auto p = td_test::provenance_problem(fr); !p.empty()) return {false, where + "fr " + p};
    spans += en.provenance.size();
  }
  return {true, "100 random models, " + std::to_string(spans) + " spans per language, all traced"};
}

Outcome determinism() {
  Scratch a("det-a"), b("det-b");
  for (const Scratch* s : {&a, &b}) {
    if (auto err = full_pipeline(s->dir); !err.empty()) return {false, err};
  }
  const char* files[] = {"word.kb", "word.dot", "out/save-a-document.en.txt", "out/save-a-document.fr.txt",
                         "out/save-a-document.en.prov", "out/save-a-document.fr.prov"};
  for (const char* f : files) {
    if (read_file(a.dir / f) != read_file(b.dir / f)) return {false, std::string(f) + " differs between runs"};
  }
  return {true, "KB, graph, drafts and provenance identical across two runs"};
}

}  // namespace

int main() {
  const std::pair<const char*, Outcome (*)()> criteria[] = {
      {"golden-text reproduction", golden_reproduction},
      {"derivation count", derivation_count},
      {"CNL roundtrip", cnl_roundtrip},
      {"graph invariants", graph_invariants},
      {"structural parallelism", structural_parallelism},
      {"determinism", determinism},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  " << name << ": " << o.detail << "\n";
  }
  return failures;
}
