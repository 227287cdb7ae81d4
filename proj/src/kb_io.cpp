#include "taskdraft/kb_io.hpp"

#include <sstream>

#include "taskdraft/error.hpp"
#include "taskdraft/records.hpp"

namespace taskdraft::kb {

namespace {

constexpr std::string_view kMagic = "taskdraft-kb";
constexpr std::string_view kOpenSlot = "?";

void write_optional(std::ostream& out, std::string_view key, const std::optional<std::string>& v) {
  if (v) out << ' ' << key << '=' << text::bare_or_quoted(*v);
}

template <typename T>
T parse_enum(std::optional<T> v, const text::Record& r, std::string_view what, const std::string& raw) {
  if (!v) throw ParseError(r.line(), "unknown " + std::string(what) + " '" + raw + "'");
  return *v;
}

void read_record(TaskModel& model, const text::Record& r) {
  const auto& kw = r.keyword();
  try {
    if (kw == "concept") {
      r.allow_only({"layer", "parent", "label"});
      Concept c;
      c.id = r.arg(0, "an id");
      c.layer = parse_enum(parse_layer(r.require("layer")), r, "layer", r.require("layer"));
      c.parent = r.field("parent");
      c.label = r.field("label").value_or(c.id);
      model.add_concept(std::move(c));
    } else if (kw == "instance") {
      r.allow_only({"concept", "origin", "label", "widget"});
      Instance i;
      i.id = r.arg(0, "an id");
      i.concept_id = r.require("concept");
      i.origin = parse_enum(parse_origin(r.require("origin")), r, "origin", r.require("origin"));
      i.label = r.field("label").value_or(i.id);
      i.widget = r.field("widget").value_or("");
      i.generic = r.has_flag("generic");
      model.add_instance(std::move(i));
    } else if (kw == "action") {
      r.allow_only({"origin", "process", "actor", "actee", "location", "source", "means"});
      ActionNode a;
      a.id = r.arg(0, "an id");
      a.origin = parse_enum(parse_origin(r.require("origin")), r, "origin", r.require("origin"));
      a.complex.process = r.require("process");
      a.complex.actor = r.require("actor");
      a.complex.actee = r.field("actee");
      if (a.complex.actee == kOpenSlot) {
        a.complex.actee.reset();
        a.complex.actee_open = true;
      }
      a.complex.location = r.field("location");
      a.complex.source = r.field("source");
      a.complex.means = r.field("means");
      model.insert_action(std::move(a));
    } else if (kw == "plan") {
      r.allow_only({"mode", "label"});
      PlanNode p;
      p.id = r.arg(0, "an id");
      p.mode = parse_enum(parse_decomposition(r.require("mode")), r, "mode", r.require("mode"));
      p.label = r.field("label").value_or("");
      model.insert_plan(std::move(p));
    } else if (kw == "edge") {
      r.allow_only({"order"});
      RelationEdge e;
      const auto& kind = r.arg(0, "a relation kind");
      e.kind = parse_enum(parse_relation_kind(kind), r, "relation kind", kind);
      e.from = r.arg(1, "a source node");
      e.to = r.arg(2, "a target node");
      if (auto o = r.field("order")) e.order = text::parse_int(*o, r.line(), "order");
      model.insert_edge(std::move(e));
    } else {
      throw ParseError(r.line(), "unknown record '" + kw + "'");
    }
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(r.line(), e.what());
  }
}

}  // namespace

std::string serialize(const TaskModel& model) {
  std::ostringstream out;
  out << kMagic << ' ' << TaskModel::kFormatVersion << '\n';
  for (const auto& c : model.concepts()) {
    out << "concept " << c.id << " layer=" << to_string(c.layer);
    write_optional(out, "parent", c.parent);
    out << " label=" << text::quote(c.label) << '\n';
  }
  for (const auto& i : model.instances()) {
    out << "instance " << i.id << " concept=" << i.concept_id << " origin=" << to_string(i.origin)
        << " label=" << text::quote(i.label);
    if (!i.widget.empty()) out << " widget=" << text::bare_or_quoted(i.widget);
    if (i.generic) out << " generic";
    out << '\n';
  }
  for (const auto& a : model.actions()) {
    const auto& c = a.complex;
    out << "action " << a.id << " origin=" << to_string(a.origin) << " process=" << c.process
        << " actor=" << c.actor;
    if (c.actee_open) {
      out << " actee=" << kOpenSlot;
    } else {
      write_optional(out, "actee", c.actee);
    }
    write_optional(out, "location", c.location);
    write_optional(out, "source", c.source);
    write_optional(out, "means", c.means);
    out << '\n';
  }
  for (const auto& p : model.plans()) {
    out << "plan " << p.id << " mode=" << to_string(p.mode);
    if (!p.label.empty()) out << " label=" << text::quote(p.label);
    out << '\n';
  }
  for (const auto& e : model.edges()) {
    out << "edge " << to_string(e.kind) << ' ' << e.from << ' ' << e.to;
    if (e.order) out << " order=" << *e.order;
    out << '\n';
  }
  return out.str();
}

TaskModel parse_kb(std::string_view text) {
  TaskModel model;
  merge_kb(model, text);
  return model;
}

void merge_kb(TaskModel& model, std::string_view text) {
  auto file = text::read_record_file(text, kMagic, TaskModel::kFormatVersion);
  for (const auto& r : file.records) read_record(model, r);
}

}  // namespace taskdraft::kb
