#include "taskdraft/graph.hpp"

#include <algorithm>
#include <tuple>

#include <json.hpp>

namespace taskdraft::graph {

namespace {

template <class T>
std::vector<const T*> sorted_by_id(const std::vector<T>& items) {
  std::vector<const T*> out;
  for (const auto& i : items) out.push_back(&i);
  std::sort(out.begin(), out.end(), [](const T* a, const T* b) { return a->id < b->id; });
  return out;
}

std::vector<const kb::RelationEdge*> sorted_edges(const kb::TaskModel& model) {
  std::vector<const kb::RelationEdge*> out;
  for (const auto& e : model.edges()) out.push_back(&e);
  std::sort(out.begin(), out.end(), [](const kb::RelationEdge* a, const kb::RelationEdge* b) {
    auto key = [](const kb::RelationEdge* e) {
      return std::make_tuple(std::string_view(e->from), static_cast<int>(e->kind), e->order.value_or(INT32_MAX),
                             std::string_view(e->to));
    };
    return key(a) < key(b);
  });
  return out;
}

std::string dot_id(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string to_dot(const kb::TaskModel& model) {
  std::string out = "digraph \"taskmodel\" {\n";
  for (const auto* a : sorted_by_id(model.actions())) {
    out += "  " + dot_id(a->id) + " [shape=ellipse";
    if (a->is_effect()) out += ", style=dashed, kind=effect";
    else out += ", kind=action";
    out += ", origin=" + std::string(kb::to_string(a->origin)) + "];\n";
  }
  for (const auto* p : sorted_by_id(model.plans())) {
    out += "  " + dot_id(p->id) + " [shape=box, kind=plan, mode=" + std::string(kb::to_string(p->mode));
    if (!p->label.empty()) out += ", label=" + dot_id(p->label);
    out += "];\n";
  }
  for (const auto* e : sorted_edges(model)) {
    std::string label(kb::to_string(e->kind));
    if (e->order) label += " " + std::to_string(*e->order);
    out += "  " + dot_id(e->from) + " -> " + dot_id(e->to) + " [label=" + dot_id(label) + "];\n";
  }
  return out + "}\n";
}

std::string to_json(const kb::TaskModel& model) {
  nlohmann::ordered_json nodes = nlohmann::ordered_json::array();
  for (const auto* a : sorted_by_id(model.actions())) {
    nlohmann::ordered_json n;
    n["id"] = a->id;
    n["type"] = "action";
    n["effect"] = a->is_effect();
    n["origin"] = kb::to_string(a->origin);
    nodes.push_back(std::move(n));
  }
  for (const auto* p : sorted_by_id(model.plans())) {
    nlohmann::ordered_json n;
    n["id"] = p->id;
    n["type"] = "plan";
    n["mode"] = kb::to_string(p->mode);
    n["label"] = p->label;
    nodes.push_back(std::move(n));
  }
  nlohmann::ordered_json edges = nlohmann::ordered_json::array();
  for (const auto* e : sorted_edges(model)) {
    nlohmann::ordered_json j;
    j["kind"] = kb::to_string(e->kind);
    j["from"] = e->from;
    j["to"] = e->to;
    if (e->order) j["order"] = *e->order;
    edges.push_back(std::move(j));
  }
  nlohmann::ordered_json doc;
  doc["nodes"] = std::move(nodes);
  doc["edges"] = std::move(edges);
  return doc.dump(2) + "\n";
}

}  // namespace taskdraft::graph
