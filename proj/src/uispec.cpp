#include "taskdraft/uispec.hpp"

#include <map>
#include <set>

#include "taskdraft/error.hpp"
#include "taskdraft/records.hpp"

namespace taskdraft::uispec {

namespace {

using text::Token;

constexpr std::pair<WidgetKind, std::string_view> kKinds[] = {
    {WidgetKind::application, "application"}, {WidgetKind::window, "window"},
    {WidgetKind::dialog, "dialog"},           {WidgetKind::menu, "menu"},
    {WidgetKind::menu_item, "menu-item"},     {WidgetKind::button, "button"},
    {WidgetKind::icon_button, "icon-button"}, {WidgetKind::text_field, "text-field"},
    {WidgetKind::list, "list"}};

class SpecParser {
 public:
  explicit SpecParser(std::string_view input) {
    for (auto& line : text::tokenize_lines(input)) {
      for (auto& t : line) tokens_.push_back(std::move(t));
    }
  }

  WidgetSpec parse() {
    if (tokens_.empty()) throw ParseError(1, "empty input; expected 'uispec <version>'");
    const Token& magic = next("header");
    if (magic.kind != Token::Kind::word || magic.text != "uispec") {
      throw ParseError(magic.line, "expected header 'uispec <version>'");
    }
    const Token& version = next("version");
    if (text::parse_int(version.text, version.line, "version") != 1) {
      throw ParseError(version.line, "unsupported uispec version " + version.text);
    }
    if (at_end()) throw ParseError(version.line, "missing application element");

    WidgetSpec root = element();
    if (root.kind != WidgetKind::application) {
      throw Error("illegal-nesting", "(root), " + std::string(to_string(root.kind)) + " at line " +
                                         std::to_string(root.line));
    }
    if (!at_end()) throw ParseError(tokens_[pos_].line, "content after the application element");

    std::set<std::string> ids;
    check_ids(root, ids);
    return root;
  }

 private:
  bool at_end() const { return pos_ >= tokens_.size(); }

  const Token& next(std::string_view what) {
    if (at_end()) {
      throw ParseError(tokens_.empty() ? 1 : tokens_.back().line, "unexpected end of input, expected " + std::string(what));
    }
    return tokens_[pos_++];
  }

  WidgetSpec element() {
    const Token& kind_tok = next("a widget kind");
    if (kind_tok.kind != Token::Kind::word) throw ParseError(kind_tok.line, "expected a widget kind, got '" + kind_tok.text + "'");
    auto kind = parse_widget_kind(kind_tok.text);
    if (!kind) throw ParseError(kind_tok.line, "unknown widget kind '" + kind_tok.text + "'");

    WidgetSpec w;
    w.kind = *kind;
    w.line = kind_tok.line;

    const Token& id = next("a widget id");
    if (id.kind != Token::Kind::word) throw ParseError(id.line, "expected a widget id after " + kind_tok.text);
    w.id = id.text;

    const Token& label = next("a quoted label");
    if (label.kind != Token::Kind::string) throw ParseError(label.line, "expected a quoted label for " + w.id);
    w.label = label.text;

    while (!at_end() && tokens_[pos_].kind == Token::Kind::field) {
      const Token& f = tokens_[pos_++];
      if (f.text == "content" && w.kind == WidgetKind::text_field) {
        w.content = f.value;
      } else {
        throw ParseError(f.line, "unknown attribute '" + f.text + "' on " + kind_tok.text);
      }
    }

    if (!at_end() && tokens_[pos_].kind == Token::Kind::open_brace) {
      ++pos_;
      while (true) {
        if (at_end()) throw ParseError(tokens_.back().line, "unclosed '{' of " + w.id);
        if (tokens_[pos_].kind == Token::Kind::close_brace) {
          ++pos_;
          break;
        }
        WidgetSpec child = element();
        if (!may_contain(w.kind, child.kind)) {
          throw Error("illegal-nesting", std::string(to_string(w.kind)) + ", " + std::string(to_string(child.kind)) +
                                             " at line " + std::to_string(child.line));
        }
        w.children.push_back(std::move(child));
      }
    }
    return w;
  }

  static void check_ids(const WidgetSpec& w, std::set<std::string>& ids) {
    if (!ids.insert(w.id).second) {
      throw Error("duplicate-id", w.id + " at line " + std::to_string(w.line));
    }
    for (const auto& c : w.children) check_ids(c, ids);
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

std::string_view kind_suffix(WidgetKind kind) {
  switch (kind) {
    case WidgetKind::menu: return "menu";
    case WidgetKind::menu_item: return "option";
    case WidgetKind::button: return "button";
    case WidgetKind::icon_button: return "icon";
    case WidgetKind::text_field: return "field";
    default: return "";
  }
}

std::string base_slug(const WidgetSpec& w) {
  std::string slug = kb::slugify(w.label);
  if (slug.empty()) slug = kb::slugify(w.id);
  auto suffix = kind_suffix(w.kind);
  if (!suffix.empty()) slug += "-" + std::string(suffix);
  return slug;
}

struct Flat {
  const WidgetSpec* widget;
  const WidgetSpec* parent;
};

void flatten(const WidgetSpec& w, const WidgetSpec* parent, std::vector<Flat>& out) {
  out.push_back({&w, parent});
  for (const auto& c : w.children) flatten(c, &w, out);
}

}  // namespace

std::string_view to_string(WidgetKind kind) {
  for (const auto& [k, name] : kKinds) {
    if (k == kind) return name;
  }
  return "?";
}

std::optional<WidgetKind> parse_widget_kind(std::string_view s) {
  for (const auto& [k, name] : kKinds) {
    if (name == s) return k;
  }
  return std::nullopt;
}

bool may_contain(WidgetKind parent, WidgetKind child) {
  using K = WidgetKind;
  switch (child) {
    case K::application: return false;
    case K::window:
    case K::dialog: return parent == K::application;
    case K::menu_item: return parent == K::menu;
    case K::menu:
    case K::button:
    case K::icon_button:
    case K::text_field:
    case K::list: return parent == K::window || parent == K::dialog || parent == K::application;
  }
  return false;
}

WidgetSpec parse_uispec(std::string_view text) { return SpecParser(text).parse(); }

RuleTable parse_rules(std::string_view input) {
  auto file = text::read_record_file(input, "taskdraft-rules", 1);
  RuleTable rules;
  for (const auto& r : file.records) {
    if (r.keyword() != "rule") throw ParseError(r.line(), "unknown record '" + r.keyword() + "'");
    DerivationRule rule;
    const auto& kind = r.arg(0, "a widget kind");
    auto k = parse_widget_kind(kind);
    if (!k) throw ParseError(r.line(), "unknown widget kind '" + kind + "'");
    rule.kind = *k;
    rule.process = r.arg(1, "a process concept");
    for (const auto& [key, value] : r.fields()) {
      kb::Role role;
      if (key == "actee") {
        role = kb::Role::actee;
      } else if (key == "location") {
        role = kb::Role::location;
      } else if (key == "source") {
        role = kb::Role::source;
      } else {
        throw ParseError(r.line(), "unknown role '" + key + "'");
      }
      Binding b;
      if (value == "self") {
        b = Binding::self;
      } else if (value == "parent") {
        b = Binding::parent;
      } else if (value == "content") {
        b = Binding::content;
      } else {
        throw ParseError(r.line(), "unknown binding '" + value + "'");
      }
      rule.roles.emplace_back(role, b);
    }
    rules.push_back(std::move(rule));
  }
  return rules;
}

Derivation derive_instances(const WidgetSpec& tree, const RuleTable& rules, const kb::TaskModel& ontology) {
  for (const auto& rule : rules) {
    const kb::Concept* c = ontology.find_concept(rule.process);
    if (!c || c->layer != kb::Layer::interface || !ontology.subsumes("action", rule.process)) {
      throw Error("unknown-rule-concept", rule.process);
    }
  }

  std::vector<Flat> widgets;
  flatten(tree, nullptr, widgets);

  for (const auto& f : widgets) {
    if (!ontology.find_concept(to_string(f.widget->kind))) {
      throw Error("unknown-concept", "widget kind " + std::string(to_string(f.widget->kind)) + " has no concept");
    }
  }

  // Instance ids: label slug + kind suffix; slugs shared by several widgets
  // are qualified with the parent's id, then numbered if still taken.
  std::map<std::string, int> slug_count;
  for (const auto& f : widgets) ++slug_count[base_slug(*f.widget)];

  std::map<const WidgetSpec*, std::string> instance_of;
  std::set<std::string> taken;
  for (const auto& i : ontology.instances()) taken.insert(i.id);

  Derivation out;
  for (const auto& f : widgets) {
    std::string id = base_slug(*f.widget);
    if (slug_count[id] > 1 && f.parent) id = instance_of[f.parent] + "-" + id;
    if (taken.count(id)) {
      int n = 2;
      while (taken.count(id + "-" + std::to_string(n))) ++n;
      id += "-" + std::to_string(n);
    }
    taken.insert(id);
    instance_of[f.widget] = id;

    kb::Instance inst{id, std::string(to_string(f.widget->kind)), f.widget->label, kb::Origin::derived, false,
                      f.widget->id};
    (f.widget->kind == WidgetKind::application ? out.agents : out.objects).push_back(std::move(inst));
  }

  std::set<std::string> node_ids;
  for (const auto& a : ontology.actions()) node_ids.insert(a.id);
  for (const auto& p : ontology.plans()) node_ids.insert(p.id);

  for (const auto& f : widgets) {
    for (const auto& rule : rules) {
      if (rule.kind != f.widget->kind) continue;
      kb::ActionComplex complex;
      complex.process = rule.process;
      for (const auto& [role, binding] : rule.roles) {
        std::optional<std::string> value;
        switch (binding) {
          case Binding::self: value = instance_of[f.widget]; break;
          case Binding::parent:
            if (f.parent) value = instance_of[f.parent];
            break;
          case Binding::content: value = f.widget->content; break;
        }
        if (role == kb::Role::actee) {
          complex.actee = value;
          complex.actee_open = !value.has_value();
        } else if (role == kb::Role::location) {
          complex.location = value;
        } else if (role == kb::Role::source) {
          complex.source = value;
        }
      }
      std::string id = ontology.action_slug(complex);
      if (node_ids.count(id)) {
        int n = 2;
        while (node_ids.count(id + "-" + std::to_string(n))) ++n;
        id += "-" + std::to_string(n);
      }
      node_ids.insert(id);
      out.actions.push_back(kb::ActionNode{id, std::move(complex), kb::Origin::derived});
    }
  }
  return out;
}

kb::TaskModel ingest(const WidgetSpec& tree, const RuleTable& rules, const kb::TaskModel& ontology) {
  Derivation d = derive_instances(tree, rules, ontology);
  kb::TaskModel model = ontology;
  for (auto& i : d.agents) model.add_instance(std::move(i));
  for (auto& i : d.objects) model.add_instance(std::move(i));
  for (auto& a : d.actions) {
    for (kb::Role role : {kb::Role::actee, kb::Role::location, kb::Role::source}) {
      const auto& f = a.complex.filler(role);
      if (f && !model.find_instance(*f)) {
        throw Error("unresolved-filler", a.id + " " + std::string(kb::to_string(role)) + " " + *f);
      }
    }
    model.insert_action(std::move(a));
  }
  return model;
}

}  // namespace taskdraft::uispec
