#include "taskdraft/script.hpp"

#include <sstream>

#include "taskdraft/records.hpp"

namespace taskdraft::script {

namespace {

constexpr std::string_view kMagic = "taskdraft-author";

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

AuthorScript parse_script(std::string_view input) {
  auto file = text::read_record_file(input, kMagic, 1);
  AuthorScript script;
  for (const auto& r : file.records) {
    const auto& kw = r.keyword();
    if (kw == "action") {
      r.allow_only({});
      if (r.args().empty()) throw ParseError(r.line(), "'action' needs a sentence");
      std::string sentence;
      for (const auto& a : r.args()) sentence += (sentence.empty() ? "" : " ") + a;
      script.commands.emplace_back(AddAction{std::move(sentence)});
    } else if (kw == "plan") {
      r.allow_only({});
      AddPlan p;
      const auto& mode = r.arg(0, "a decomposition mode");
      auto m = kb::parse_decomposition(mode);
      if (!m) throw ParseError(r.line(), "unknown decomposition '" + mode + "'");
      p.mode = *m;
      if (r.args().size() > 1) p.name = r.args()[1];
      if (r.args().size() > 2) p.label = r.args()[2];
      if (r.args().size() > 3) throw ParseError(r.line(), "too many arguments to 'plan'");
      script.commands.emplace_back(std::move(p));
    } else if (kw == "link") {
      r.allow_only({"order"});
      Link l;
      const auto& kind = r.arg(0, "a relation kind");
      auto k = kb::parse_relation_kind(kind);
      if (!k) throw ParseError(r.line(), "unknown relation kind '" + kind + "'");
      l.kind = *k;
      l.from = r.arg(1, "a source node");
      l.to = r.arg(2, "a target node");
      if (r.args().size() > 3) throw ParseError(r.line(), "too many arguments to 'link'");
      if (auto o = r.field("order")) l.order = text::parse_int(*o, r.line(), "order");
      script.commands.emplace_back(std::move(l));
    } else {
      throw ParseError(r.line(), "unknown command '" + kw + "'");
    }
  }
  return script;
}

std::string format_command(const Command& command) {
  return std::visit(overloaded{
                        [](const AddAction& a) { return "action " + a.sentence; },
                        [](const AddPlan& p) {
                          std::string s = "plan " + std::string(kb::to_string(p.mode));
                          if (!p.name.empty() || !p.label.empty()) s += " " + text::bare_or_quoted(p.name.empty() ? "plan" : p.name);
                          if (!p.label.empty()) s += " " + text::quote(p.label);
                          return s;
                        },
                        [](const Link& l) {
                          std::string s = "link " + std::string(kb::to_string(l.kind)) + " " + l.from + " " + l.to;
                          if (l.order) s += " order=" + std::to_string(*l.order);
                          return s;
                        },
                    },
                    command);
}

std::string serialize(const AuthorScript& script) {
  std::string out = std::string(kMagic) + " 1\n";
  for (const auto& c : script.commands) out += format_command(c) + "\n";
  return out;
}

CommandResult apply_command(kb::TaskModel& model, const cnl::Grammar& grammar, const Command& command) {
  return std::visit(overloaded{
                        [&](const AddAction& a) {
                          kb::ActionComplex complex = cnl::Engine(grammar, model).parse(a.sentence);
                          auto r = model.add_action(complex, kb::Origin::authored);
                          return CommandResult{r.id, r.duplicate};
                        },
                        [&](const AddPlan& p) { return CommandResult{model.add_plan(p.mode, p.name, p.label), false}; },
                        [&](const Link& l) {
                          model.link(l.kind, l.from, l.to, l.order);
                          return CommandResult{l.from, false};
                        },
                    },
                    command);
}

kb::TaskModel apply_script(const kb::TaskModel& model, const cnl::Grammar& grammar, const AuthorScript& script) {
  kb::TaskModel work = model;
  for (std::size_t i = 0; i < script.commands.size(); ++i) {
    try {
      apply_command(work, grammar, script.commands[i]);
    } catch (const Error& e) {
      throw ScriptError(i + 1, e);
    }
  }
  return work;
}

}  // namespace taskdraft::script
