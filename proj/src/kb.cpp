#include "taskdraft/kb.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <tuple>
#include <unordered_set>

#include "taskdraft/error.hpp"

namespace taskdraft::kb {

namespace {

constexpr std::string_view kActionRoot = "action";
constexpr std::string_view kAgentRoot = "agent";

template <typename Enum, std::size_t N>
std::optional<Enum> lookup(std::string_view s, const std::pair<Enum, std::string_view> (&table)[N]) {
  for (const auto& [e, name] : table) {
    if (name == s) return e;
  }
  return std::nullopt;
}

template <typename Enum, std::size_t N>
std::string_view name_of(Enum e, const std::pair<Enum, std::string_view> (&table)[N]) {
  for (const auto& [v, name] : table) {
    if (v == e) return name;
  }
  return "?";
}

constexpr std::pair<Layer, std::string_view> kLayers[] = {
    {Layer::upper, "upper"}, {Layer::instruction, "instruction"}, {Layer::interface, "interface"},
    {Layer::application, "application"}};
constexpr std::pair<Origin, std::string_view> kOrigins[] = {
    {Origin::base, "base"}, {Origin::derived, "derived"}, {Origin::authored, "authored"}};
constexpr std::pair<Role, std::string_view> kRoles[] = {{Role::actor, "actor"},
                                                        {Role::actee, "actee"},
                                                        {Role::location, "location"},
                                                        {Role::source, "source"},
                                                        {Role::means, "means"}};
constexpr std::pair<Decomposition, std::string_view> kModes[] = {{Decomposition::sequence, "sequence"},
                                                                 {Decomposition::choice, "choice"}};
constexpr std::pair<RelationKind, std::string_view> kKinds[] = {
    {RelationKind::goal, "goal"},
    {RelationKind::precondition, "precondition"},
    {RelationKind::sub_action, "sub-action"},
    {RelationKind::side_effect, "side-effect"},
    {RelationKind::warning, "warning"},
    {RelationKind::cancellation, "cancellation"}};

bool plan_to_action(RelationKind kind) { return kind != RelationKind::side_effect; }

bool in_dependency_graph(RelationKind kind) {
  return kind == RelationKind::goal || kind == RelationKind::precondition || kind == RelationKind::sub_action;
}

bool edge_less(const RelationEdge* a, const RelationEdge* b) {
  // Unordered edges sort after ordered ones.
  int oa = a->order.value_or(std::numeric_limits<int>::max());
  int ob = b->order.value_or(std::numeric_limits<int>::max());
  if (oa != ob) return oa < ob;
  return a->to < b->to;
}

bool starts_with_vowel(std::string_view s) {
  return !s.empty() && std::string_view("aeiou").find(s.front()) != std::string_view::npos;
}

}  // namespace

std::string_view to_string(Layer v) { return name_of(v, kLayers); }
std::string_view to_string(Origin v) { return name_of(v, kOrigins); }
std::string_view to_string(Role v) { return name_of(v, kRoles); }
std::string_view to_string(Decomposition v) { return name_of(v, kModes); }
std::string_view to_string(RelationKind v) { return name_of(v, kKinds); }
std::optional<Layer> parse_layer(std::string_view s) { return lookup(s, kLayers); }
std::optional<Origin> parse_origin(std::string_view s) { return lookup(s, kOrigins); }
std::optional<Decomposition> parse_decomposition(std::string_view s) { return lookup(s, kModes); }
std::optional<RelationKind> parse_relation_kind(std::string_view s) { return lookup(s, kKinds); }

const std::optional<std::string>& ActionComplex::filler(Role role) const {
  static const std::optional<std::string> none;
  switch (role) {
    case Role::actee: return actee;
    case Role::location: return location;
    case Role::source: return source;
    case Role::means: return means;
    case Role::actor: break;
  }
  return none;
}

std::string slugify(std::string_view text) {
  std::string out;
  bool pending_dash = false;
  for (unsigned char c : text) {
    if (std::isalnum(c)) {
      if (pending_dash && !out.empty()) out.push_back('-');
      pending_dash = false;
      out.push_back(static_cast<char>(std::tolower(c)));
    } else {
      pending_dash = true;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Lookups

void TaskModel::add_concept(Concept c) {
  if (concept_index_.count(c.id)) throw Error("duplicate-id", "concept " + c.id);
  concept_index_.emplace(c.id, concepts_.size());
  concepts_.push_back(std::move(c));
}

void TaskModel::add_instance(Instance instance) {
  if (instance_index_.count(instance.id)) throw Error("duplicate-id", "instance " + instance.id);
  instance_index_.emplace(instance.id, instances_.size());
  instances_.push_back(std::move(instance));
}

const Concept* TaskModel::find_concept(std::string_view id) const {
  auto it = concept_index_.find(std::string(id));
  return it == concept_index_.end() ? nullptr : &concepts_[it->second];
}

const Instance* TaskModel::find_instance(std::string_view id) const {
  auto it = instance_index_.find(std::string(id));
  return it == instance_index_.end() ? nullptr : &instances_[it->second];
}

const ActionNode* TaskModel::find_action(std::string_view id) const {
  auto it = action_index_.find(std::string(id));
  return it == action_index_.end() ? nullptr : &actions_[it->second];
}

const PlanNode* TaskModel::find_plan(std::string_view id) const {
  auto it = plan_index_.find(std::string(id));
  return it == plan_index_.end() ? nullptr : &plans_[it->second];
}

bool TaskModel::subsumes(std::string_view ancestor, std::string_view id) const {
  const Concept* c = find_concept(id);
  for (std::size_t steps = 0; c && steps <= concepts_.size(); ++steps) {
    if (c->id == ancestor) return true;
    if (!c->parent) return false;
    c = find_concept(*c->parent);
  }
  return false;
}

std::vector<std::string> TaskModel::children_of(std::string_view concept_id) const {
  std::vector<std::string> out;
  for (const auto& c : concepts_) {
    if (c.parent && *c.parent == concept_id) out.push_back(c.id);
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool TaskModel::is_agent(std::string_view instance_id) const {
  const Instance* inst = find_instance(instance_id);
  return inst && subsumes(kAgentRoot, inst->concept_id);
}

// ---------------------------------------------------------------------------
// Authoring

std::string TaskModel::action_slug(const ActionComplex& complex) const {
  auto term = [&](const std::string& instance_id) -> std::string {
    const Instance* inst = find_instance(instance_id);
    if (inst && inst->generic) {
      return (starts_with_vowel(inst->concept_id) ? "an-" : "a-") + inst->concept_id;
    }
    return instance_id;
  };
  std::string slug = complex.process;
  if (complex.actee) {
    slug += "-" + term(*complex.actee);
  } else if (complex.actee_open && complex.location) {
    slug += "-" + term(*complex.location);
  }
  return slug;
}

std::string TaskModel::unique_node_id(const std::string& base) const {
  if (!has_node(base)) return base;
  for (int n = 2;; ++n) {
    std::string candidate = base + "-" + std::to_string(n);
    if (!has_node(candidate)) return candidate;
  }
}

void TaskModel::check_fillers(const ActionComplex& complex) const {
  const Concept* process = find_concept(complex.process);
  if (!process) throw Error("unresolved-filler", "process");
  if (!subsumes(kActionRoot, complex.process)) {
    throw Error("bad-process", complex.process + " is not an action concept");
  }
  if (!is_agent(complex.actor)) throw Error("unresolved-filler", "actor");
  for (Role role : {Role::actee, Role::location, Role::source}) {
    const auto& f = complex.filler(role);
    if (f && !find_instance(*f)) throw Error("unresolved-filler", std::string(to_string(role)));
  }
  if (complex.means && !has_node(*complex.means)) throw Error("unresolved-filler", "means");
}

AddActionResult TaskModel::add_action(const ActionComplex& complex, Origin origin) {
  check_fillers(complex);
  for (const auto& a : actions_) {
    if (a.complex == complex) return {a.id, true};
  }
  ActionNode node{unique_node_id(action_slug(complex)), complex, origin};
  std::string id = node.id;
  insert_action(std::move(node));
  return {id, false};
}

std::string TaskModel::add_plan(Decomposition mode, std::string_view name, std::string label) {
  std::string base = slugify(name);
  if (base.empty()) base = "plan";
  std::string id = unique_node_id(base);
  insert_plan(PlanNode{id, mode, std::move(label)});
  return id;
}

bool TaskModel::reaches(std::string_view from, std::string_view target) const {
  std::vector<std::string> stack{std::string(from)};
  std::unordered_set<std::string> seen;
  while (!stack.empty()) {
    std::string node = std::move(stack.back());
    stack.pop_back();
    if (node == target) return true;
    if (!seen.insert(node).second) continue;
    for (const auto& e : edges_) {
      if (!in_dependency_graph(e.kind)) continue;
      if (e.kind == RelationKind::goal) {
        if (e.to == node) stack.push_back(e.from);  // action -> its achieving plan
      } else if (e.from == node) {
        stack.push_back(e.to);
      }
    }
  }
  return false;
}

const RelationEdge& TaskModel::link(RelationKind kind, std::string_view from, std::string_view to,
                                    std::optional<int> order) {
  const std::string kind_name(to_string(kind));
  if (!has_node(from)) throw Error("unknown-node", std::string(from));
  if (!has_node(to)) throw Error("unknown-node", std::string(to));

  const PlanNode* plan = find_plan(from);
  const ActionNode* target = find_action(to);
  if (plan_to_action(kind)) {
    if (!plan) throw Error("type-mismatch", kind_name + " must start at a plan, got " + std::string(from));
    if (!target) throw Error("type-mismatch", kind_name + " must end at an action, got " + std::string(to));
  } else {
    if (!find_action(from)) throw Error("type-mismatch", "side-effect must start at an action");
    if (!target) throw Error("type-mismatch", "side-effect must end at an action");
    if (!target->is_effect()) {
      throw Error("type-mismatch", "side-effect target " + std::string(to) + " must be performed by a system agent");
    }
  }
  if (order && *order < 1) throw Error("bad-order", "orders start at 1");

  for (const auto& e : edges_) {
    if (e.kind == kind && e.from == from && e.to == to) {
      throw Error("duplicate-edge", kind_name + " " + std::string(from) + " -> " + std::string(to));
    }
  }

  if (kind == RelationKind::goal) {
    if (auto existing = goal_of(from)) {
      throw Error("duplicate-goal", std::string(from) + " already has goal " + *existing);
    }
    if (auto achiever = achiever_of(to)) {
      throw Error("duplicate-goal", std::string(to) + " is already the goal of " + *achiever);
    }
    if (reaches(from, to)) {
      throw Error("would-create-cycle", std::string(to) + " is needed to carry out " + std::string(from));
    }
  }

  if (kind == RelationKind::precondition || kind == RelationKind::sub_action) {
    if (reaches(to, from)) {
      throw Error("would-create-cycle", std::string(to) + " depends on " + std::string(from));
    }
  }

  if (kind == RelationKind::sub_action) {
    int highest = 0;
    for (const auto* e : outgoing(from, RelationKind::sub_action)) {
      if (e->order) {
        if (order && *e->order == *order) {
          throw Error("order-collision", std::string(from) + " already has sub-action " + std::to_string(*order));
        }
        highest = std::max(highest, *e->order);
      }
    }
    if (!order && plan->mode == Decomposition::sequence) order = highest + 1;
  }

  edges_.push_back(RelationEdge{kind, std::string(from), std::string(to), order});
  return edges_.back();
}

void TaskModel::insert_action(ActionNode node) {
  if (has_node(node.id)) throw Error("duplicate-id", "node " + node.id);
  action_index_.emplace(node.id, actions_.size());
  actions_.push_back(std::move(node));
}

void TaskModel::insert_plan(PlanNode plan) {
  if (has_node(plan.id)) throw Error("duplicate-id", "node " + plan.id);
  plan_index_.emplace(plan.id, plans_.size());
  plans_.push_back(std::move(plan));
}

void TaskModel::insert_edge(RelationEdge edge) { edges_.push_back(std::move(edge)); }

// ---------------------------------------------------------------------------
// Queries

std::vector<const RelationEdge*> TaskModel::outgoing(std::string_view from, RelationKind kind) const {
  std::vector<const RelationEdge*> out;
  for (const auto& e : edges_) {
    if (e.kind == kind && e.from == from) out.push_back(&e);
  }
  std::stable_sort(out.begin(), out.end(), edge_less);
  return out;
}

std::optional<std::string> TaskModel::goal_of(std::string_view plan_id) const {
  auto goals = outgoing(plan_id, RelationKind::goal);
  if (goals.empty()) return std::nullopt;
  return goals.front()->to;
}

std::optional<std::string> TaskModel::achiever_of(std::string_view action_id) const {
  std::optional<std::string> best;
  for (const auto& e : edges_) {
    if (e.kind == RelationKind::goal && e.to == action_id && (!best || e.from < *best)) best = e.from;
  }
  return best;
}

// ---------------------------------------------------------------------------
// Validation

namespace {

class Validator {
 public:
  explicit Validator(const TaskModel& model) : model_(model) {}

  std::vector<Violation> run() {
    check_concepts();
    check_instances();
    check_actions();
    check_edges();
    check_plans();
    check_achievers();
    check_cycles();
    return std::move(out_);
  }

 private:
  void report(std::string code, std::vector<std::string> ids, std::string message) {
    out_.push_back(Violation{std::move(code), std::move(ids), std::move(message)});
  }

  void check_concepts() {
    for (const auto& c : model_.concepts()) {
      if (!c.parent) {
        if (c.layer != Layer::upper) report("concept-root", {c.id}, c.id + " is a root outside the upper layer");
        continue;
      }
      const Concept* parent = model_.find_concept(*c.parent);
      if (!parent) {
        report("unknown-concept", {c.id, *c.parent}, "parent " + *c.parent + " of " + c.id + " is undefined");
        continue;
      }
      if (static_cast<int>(parent->layer) > static_cast<int>(c.layer)) {
        report("layer-order", {c.id, parent->id},
               c.id + " (" + std::string(to_string(c.layer)) + ") sits under " + parent->id + " (" +
                   std::string(to_string(parent->layer)) + ")");
      }
      std::set<std::string> seen{c.id};
      for (const Concept* cur = parent; cur && cur->parent; cur = model_.find_concept(*cur->parent)) {
        if (!seen.insert(cur->id).second) {
          report("concept-cycle", {c.id}, "parent chain of " + c.id + " loops");
          break;
        }
      }
    }
  }

  void check_instances() {
    for (const auto& i : model_.instances()) {
      if (!model_.find_concept(i.concept_id)) {
        report("unknown-concept", {i.id, i.concept_id}, "instance " + i.id + " has undefined concept " + i.concept_id);
      }
    }
  }

  void check_actions() {
    for (const auto& a : model_.actions()) {
      const auto& c = a.complex;
      if (!model_.find_concept(c.process)) {
        report("dangling-filler", {a.id, c.process}, a.id + ": process " + c.process + " is undefined");
      } else if (!model_.subsumes(kActionRoot, c.process)) {
        report("bad-process", {a.id, c.process}, a.id + ": " + c.process + " is not an action concept");
      }
      if (!model_.is_agent(c.actor)) {
        report("dangling-filler", {a.id, c.actor}, a.id + ": actor " + c.actor + " is not a known agent");
      }
      for (Role role : {Role::actee, Role::location, Role::source}) {
        const auto& f = c.filler(role);
        if (f && !model_.find_instance(*f)) {
          report("dangling-filler", {a.id, *f},
                 a.id + ": " + std::string(to_string(role)) + " " + *f + " does not exist");
        }
      }
      if (c.means && !model_.has_node(*c.means)) {
        report("dangling-filler", {a.id, *c.means}, a.id + ": means " + *c.means + " does not exist");
      }
    }
  }

  void check_edges() {
    std::set<std::tuple<int, std::string, std::string>> seen;
    for (const auto& e : model_.edges()) {
      std::string kind(to_string(e.kind));
      bool ok = true;
      for (const auto* end : {&e.from, &e.to}) {
        if (!model_.has_node(*end)) {
          report("dangling-endpoint", {*end}, kind + " edge references missing node " + *end);
          ok = false;
        }
      }
      if (!ok) continue;
      if (!seen.insert({static_cast<int>(e.kind), e.from, e.to}).second) {
        report("duplicate-edge", {e.from, e.to}, kind + " " + e.from + " -> " + e.to + " appears twice");
      }
      if (plan_to_action(e.kind)) {
        if (!model_.find_plan(e.from) || !model_.find_action(e.to)) {
          report("type-mismatch", {e.from, e.to}, kind + " must link a plan to an action");
        }
      } else {
        const ActionNode* target = model_.find_action(e.to);
        if (!model_.find_action(e.from) || !target) {
          report("type-mismatch", {e.from, e.to}, "side-effect must link two actions");
        } else if (!target->is_effect()) {
          report("type-mismatch", {e.from, e.to}, "side-effect " + e.to + " is not performed by a system agent");
        }
      }
    }
  }

  void check_plans() {
    for (const auto& p : model_.plans()) {
      auto goals = model_.outgoing(p.id, RelationKind::goal);
      if (goals.empty()) report("missing-goal", {p.id}, p.id + " has no goal");
      if (goals.size() > 1) report("duplicate-goal", {p.id}, p.id + " has " + std::to_string(goals.size()) + " goals");

      auto subs = model_.outgoing(p.id, RelationKind::sub_action);
      if (p.mode == Decomposition::choice && subs.size() < 2) {
        report("needs-2-alternatives", {p.id}, p.id + " is a choice with " + std::to_string(subs.size()) + " alternative(s)");
      }
      if (p.mode == Decomposition::sequence && subs.empty()) {
        report("needs-sub-action", {p.id}, p.id + " has no sub-actions");
      }

      std::map<int, int> counts;
      bool missing = false;
      for (const auto* e : subs) {
        if (e->order) {
          ++counts[*e->order];
        } else {
          missing = true;
        }
      }
      for (const auto& [order, n] : counts) {
        if (n > 1) report("order-collision", {p.id}, p.id + " has " + std::to_string(n) + " sub-actions at order " + std::to_string(order));
      }
      if (p.mode == Decomposition::sequence) {
        if (missing) report("missing-order", {p.id}, p.id + " has an unordered sub-action");
        int expected = 1;
        bool gap = false;
        for (const auto& [order, n] : counts) {
          if (order != expected++) gap = true;
        }
        if (gap) report("order-gap", {p.id}, p.id + " sub-action orders are not 1..n");
      }
    }
  }

  void check_achievers() {
    std::map<std::string, std::vector<std::string>> achievers;
    for (const auto& e : model_.edges()) {
      if (e.kind == RelationKind::goal && model_.find_plan(e.from) && model_.find_action(e.to)) {
        achievers[e.to].push_back(e.from);
      }
    }
    for (auto& [action, plans] : achievers) {
      if (plans.size() > 1) {
        std::sort(plans.begin(), plans.end());
        std::vector<std::string> ids{action};
        ids.insert(ids.end(), plans.begin(), plans.end());
        report("multiple-achievers", ids, action + " is the goal of several plans");
      }
    }
  }

  // Dependency graph: plan -> precondition/sub-action targets, action -> the
  // plan achieving it. Any strongly connected component is a cycle.
  void check_cycles() {
    std::map<std::string, std::vector<std::string>> next;
    for (const auto& e : model_.edges()) {
      if (!in_dependency_graph(e.kind) || !model_.has_node(e.from) || !model_.has_node(e.to)) continue;
      if (e.kind == RelationKind::goal) {
        next[e.to].push_back(e.from);
      } else {
        next[e.from].push_back(e.to);
      }
    }
    for (auto& [k, v] : next) std::sort(v.begin(), v.end());

    // Tarjan over a std::map for a deterministic visiting order.
    std::map<std::string, int> index, low;
    std::set<std::string> on_stack;
    std::vector<std::string> stack;
    std::vector<std::vector<std::string>> components;
    int counter = 0;

    std::function<void(const std::string&)> strongconnect = [&](const std::string& v) {
      index[v] = low[v] = counter++;
      stack.push_back(v);
      on_stack.insert(v);
      for (const auto& w : next[v]) {
        if (!index.count(w)) {
          strongconnect(w);
          low[v] = std::min(low[v], low[w]);
        } else if (on_stack.count(w)) {
          low[v] = std::min(low[v], index[w]);
        }
      }
      if (low[v] == index[v]) {
        std::vector<std::string> comp;
        std::string w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack.erase(w);
          comp.push_back(w);
        } while (w != v);
        if (comp.size() > 1) components.push_back(std::move(comp));
      }
    };

    std::vector<std::string> keys;
    for (const auto& [k, v] : next) keys.push_back(k);
    for (const auto& k : keys) {
      if (!index.count(k)) strongconnect(k);
    }

    for (auto& comp : components) {
      std::sort(comp.begin(), comp.end());
      std::set<std::string> members(comp.begin(), comp.end());
      report("cycle", cycle_path(comp.front(), members, next), "");
      auto& v = out_.back();
      for (std::size_t i = 0; i < v.ids.size(); ++i) v.message += (i ? " -> " : "") + v.ids[i];
    }
  }

  static std::vector<std::string> cycle_path(const std::string& start, const std::set<std::string>& members,
                                             std::map<std::string, std::vector<std::string>>& next) {
    std::vector<std::string> path{start};
    std::set<std::string> visited{start};
    std::function<bool(const std::string&)> dfs = [&](const std::string& v) {
      for (const auto& w : next[v]) {
        if (!members.count(w)) continue;
        if (w == start) {
          path.push_back(w);
          return true;
        }
        if (visited.insert(w).second) {
          path.push_back(w);
          if (dfs(w)) return true;
          path.pop_back();
        }
      }
      return false;
    };
    dfs(start);
    return path;
  }

  const TaskModel& model_;
  std::vector<Violation> out_;
};

}  // namespace

std::vector<Violation> validate(const TaskModel& model) { return Validator(model).run(); }

std::string format_violation(const Violation& v) { return v.code + ": " + v.message; }

}  // namespace taskdraft::kb
