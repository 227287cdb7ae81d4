// taskdraft: command-line front end for the drafting pipeline.
//
// Exit codes: 0 ok, 1 unreadable or malformed input, 2 write failure,
// 3 author-script error, 4 validation violations, 5 missing lexeme or
// language, 6 planning error, 64 bad command line.

#include <csignal>
#include <filesystem>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "taskdraft/error.hpp"
#include "taskdraft/graph.hpp"
#include "taskdraft/http_server.hpp"
#include "taskdraft/kb_io.hpp"
#include "taskdraft/pipeline.hpp"
#include "taskdraft/planner.hpp"
#include "taskdraft/realizer.hpp"
#include "taskdraft/script.hpp"
#include "taskdraft/session.hpp"
#include "taskdraft/uispec.hpp"

namespace fs = std::filesystem;
using namespace taskdraft;

namespace {

enum Exit { ok = 0, bad_input = 1, write_failed = 2, script_failed = 3, invalid = 4, lexeme = 5, planning = 6 };

struct Failure {
  int code;
  std::string message;
};

struct Globals {
  std::string ontology;
  std::string rules;
  std::string grammar;
  std::string lexicon_dir;
};

Resources load_resources(const Globals& g) {
  Resources r = bundled_resources();
  if (!g.ontology.empty()) r.ontology = kb::parse_kb(read_file(g.ontology));
  if (!g.rules.empty()) r.rules = uispec::parse_rules(read_file(g.rules));
  if (!g.grammar.empty()) r.grammar = cnl::parse_grammar(read_file(g.grammar));
  if (!g.lexicon_dir.empty()) load_lexicon_dir(r, g.lexicon_dir);
  return r;
}

kb::TaskModel load_model(const std::string& path) { return kb::parse_kb(read_file(path)); }

void output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  write_file(path, content);
}

int report_violations(const std::vector<kb::Violation>& violations) {
  for (const auto& v : violations) std::cerr << kb::format_violation(v) << "\n";
  return violations.empty() ? ok : invalid;
}

std::vector<std::string> split_languages(const std::string& list) {
  std::vector<std::string> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  if (out.empty()) throw Failure{64, "--lang needs at least one language"};
  return out;
}

int exit_code_for(const Error& e) {
  const std::string& c = e.code();
  if (c == "write-failed") return write_failed;
  if (c == "missing-lexeme" || c == "unknown-language") return lexeme;
  if (c == "no-plan-for-goal" || c == "unfilled-slot" || c == "unknown-node" || c == "invalid-model" ||
      c == "not-a-leaf")
    return planning;
  return bad_input;
}

service::HttpServer* running_server = nullptr;

extern "C" void on_signal(int) {
  if (running_server) running_server->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Draft multilingual software instructions from a task model."};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--ontology", g.ontology, "Ontology KB file (default: bundled)");
  app.add_option("--rules", g.rules, "Widget derivation rules (default: bundled)");
  app.add_option("--grammar", g.grammar, "CNL grammar (default: bundled)");
  app.add_option("--lexicon-dir", g.lexicon_dir, "Directory of <lang>.lex files overriding the bundled ones");

  std::string in_path, second, out_path, languages = "en,fr", format = "dot", host = "127.0.0.1",
                                        cors = "*";
  bool accented = false, fragment = false;
  int port = 8080;

  auto* ingest = app.add_subcommand("ingest", "Derive a task model from a UI spec");
  ingest->add_option("uispec", in_path, "UI spec file")->required();
  ingest->add_option("-o,--out", out_path, "KB file to write")->required();

  auto* apply = app.add_subcommand("apply", "Apply an author script to a KB (all or nothing)");
  apply->add_option("kb", in_path, "KB file")->required();
  apply->add_option("script", second, "Author script")->required();
  apply->add_option("-o,--out", out_path, "Output KB (default: overwrite the input)");

  auto* draft_cmd = app.add_subcommand("draft", "Write instruction drafts and provenance sidecars");
  draft_cmd->add_option("kb", in_path, "KB file")->required();
  draft_cmd->add_option("goal", second, "Goal action id")->required();
  draft_cmd->add_option("--lang", languages, "Comma-separated languages")->capture_default_str();
  draft_cmd->add_option("-o,--out", out_path, "Output directory (default: current)");
  draft_cmd->add_flag("--accented", accented, "Use accented lexicon variants");

  auto* plan_cmd = app.add_subcommand("plan", "Print the document plan for a goal");
  plan_cmd->add_option("kb", in_path, "KB file")->required();
  plan_cmd->add_option("goal", second, "Goal or action id")->required();
  plan_cmd->add_flag("--fragment", fragment, "Plan any action, reporting problems as diagnostics");

  auto* graph_cmd = app.add_subcommand("graph", "Export the procedural structure");
  graph_cmd->add_option("kb", in_path, "KB file")->required();
  graph_cmd->add_option("-o,--out", out_path, "Output file (default: stdout)");
  graph_cmd->add_option("--format", format, "dot or json")->check(CLI::IsMember({"dot", "json"}))->capture_default_str();

  auto* validate_cmd = app.add_subcommand("validate", "Check model invariants");
  validate_cmd->add_option("kb", in_path, "KB file")->required();

  auto* serve = app.add_subcommand("serve", "Serve the authoring API over HTTP");
  serve->add_option("kb", in_path, "KB file (POST /save writes back here)")->required();
  serve->add_option("--port", port, "Port (0 picks one)")->capture_default_str();
  serve->add_option("--host", host, "Bind address")->capture_default_str();
  serve->add_option("--cors-origin", cors, "Allowed browser origin")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 64;
  }

  try {
    if (*ingest) {
      Resources res = load_resources(g);
      uispec::WidgetSpec tree = uispec::parse_uispec(read_file(in_path));
      uispec::Derivation d = uispec::derive_instances(tree, res.rules, res.ontology);
      kb::TaskModel model = uispec::ingest(tree, res.rules, res.ontology);
      write_file(out_path, kb::serialize(model));
      std::cout << "derived " << d.actions.size() << " actions, " << d.objects.size() << " objects\n";
      return ok;
    }

    if (*apply) {
      Resources res = load_resources(g);
      kb::TaskModel model = load_model(in_path);
      script::AuthorScript s = script::parse_script(read_file(second));
      kb::TaskModel updated;
      try {
        updated = script::apply_script(model, res.grammar, s);
      } catch (const script::ScriptError& e) {
        std::cerr << "taskdraft: " << second << ": " << e.code() << ": " << e.detail() << "\n";
        return script_failed;
      }
      write_file(out_path.empty() ? in_path : out_path, kb::serialize(updated));
      std::cout << "applied " << s.commands.size() << " commands\n";
      return ok;
    }

    if (*draft_cmd) {
      Resources res = load_resources(g);
      kb::TaskModel model = load_model(in_path);
      if (int rc = report_violations(kb::validate(model)); rc != ok) return rc;
      realizer::Options options;
      options.accented = accented;
      auto docs = draft(model, second, split_languages(languages), res, options);
      fs::path dir = out_path.empty() ? fs::path(".") : fs::path(out_path);
      std::error_code ec;
      fs::create_directories(dir, ec);
      for (const auto& doc : docs) {
        fs::path text = dir / (second + "." + doc.language + ".txt");
        fs::path prov = dir / (second + "." + doc.language + ".prov");
        write_file(text, doc.text);
        write_file(prov, realizer::serialize_provenance(doc));
        std::cout << text.string() << "\n";
      }
      return ok;
    }

    if (*plan_cmd) {
      kb::TaskModel model = load_model(in_path);
      planner::DocPlan p = fragment ? planner::plan_fragment(model, second) : planner::plan_document(model, second);
      std::cout << planner::serialize(p);
      return ok;
    }

    if (*graph_cmd) {
      kb::TaskModel model = load_model(in_path);
      output(out_path, format == "json" ? graph::to_json(model) : graph::to_dot(model));
      return ok;
    }

    if (*validate_cmd) {
      kb::TaskModel model = load_model(in_path);
      auto violations = kb::validate(model);
      if (violations.empty()) std::cout << "valid\n";
      return report_violations(violations);
    }

    if (*serve) {
      Resources res = load_resources(g);
      kb::TaskModel model = load_model(in_path);
      service::Session session(std::move(model), std::move(res), in_path);
      service::HttpServer server(session, {host, port, cors});
      int bound = server.bind();
      running_server = &server;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      std::cout << "listening on http://" << host << ":" << bound << "\n" << std::flush;
      server.listen();
      running_server = nullptr;
      return ok;
    }
  } catch (const Failure& f) {
    std::cerr << "taskdraft: " << f.message << "\n";
    return f.code;
  } catch (const Error& e) {
    std::cerr << "taskdraft: " << e.code() << ": " << e.detail() << "\n";
    return exit_code_for(e);
  }
  return ok;
}
