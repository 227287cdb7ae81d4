#pragma once

// Knowledge base core: the layered concept tree, object instances, and the
// task model (action nodes, plan nodes and typed procedural relations).

#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace taskdraft::kb {

enum class Layer { upper = 0, instruction = 1, interface = 2, application = 3 };

struct Concept {
  std::string id;
  std::string label;
  Layer layer = Layer::upper;
  std::optional<std::string> parent;
};

enum class Origin { base, derived, authored };

/// An object or agent the actions talk about. `generic` instances stand for
/// any member of their concept ("the current document") and are named by
/// their concept in ids and titles.
struct Instance {
  std::string id;
  std::string concept_id;
  std::string label;
  Origin origin = Origin::base;
  bool generic = false;
  std::string widget;  // source widget id when derived from a UI spec
};

enum class Role { actor, actee, location, source, means };

inline constexpr std::string_view kReader = "reader";

struct ActionComplex {
  std::string process;
  std::string actor{kReader};
  std::optional<std::string> actee;
  std::optional<std::string> location;
  std::optional<std::string> source;
  std::optional<std::string> means;
  // Text-entry actions derived from a field with no declared content leave
  // the actee as an open slot; drafting refuses such actions.
  bool actee_open = false;

  bool operator==(const ActionComplex&) const = default;

  const std::optional<std::string>& filler(Role role) const;
};

struct ActionNode {
  std::string id;
  ActionComplex complex;
  Origin origin = Origin::authored;

  bool is_effect() const { return complex.actor != kReader; }
};

enum class Decomposition { sequence, choice };

struct PlanNode {
  std::string id;
  Decomposition mode = Decomposition::sequence;
  std::string label;
};

enum class RelationKind { goal, precondition, sub_action, side_effect, warning, cancellation };

struct RelationEdge {
  RelationKind kind = RelationKind::goal;
  std::string from;
  std::string to;
  std::optional<int> order;

  bool operator==(const RelationEdge&) const = default;
};

struct AddActionResult {
  std::string id;
  bool duplicate = false;  // an identical complex already existed; `id` is that node
};

std::string_view to_string(Layer);
std::string_view to_string(Origin);
std::string_view to_string(Role);
std::string_view to_string(Decomposition);
std::string_view to_string(RelationKind);
std::optional<Layer> parse_layer(std::string_view);
std::optional<Origin> parse_origin(std::string_view);
std::optional<Decomposition> parse_decomposition(std::string_view);
std::optional<RelationKind> parse_relation_kind(std::string_view);

/// Lowercase hyphenated slug: "Save Current Document As" -> "save-current-document-as".
std::string slugify(std::string_view text);

class TaskModel {
 public:
  inline static constexpr int kFormatVersion = 1;

  // Concepts and instances. Duplicate ids throw Error("duplicate-id").
  void add_concept(Concept c);
  void add_instance(Instance instance);

  const Concept* find_concept(std::string_view id) const;
  const Instance* find_instance(std::string_view id) const;
  const ActionNode* find_action(std::string_view id) const;
  const PlanNode* find_plan(std::string_view id) const;
  bool has_node(std::string_view id) const { return find_action(id) || find_plan(id); }

  /// True when `ancestor` is `id` or on its parent chain. Unknown ids and
  /// parent cycles yield false.
  bool subsumes(std::string_view ancestor, std::string_view id) const;
  std::vector<std::string> children_of(std::string_view concept_id) const;
  bool is_agent(std::string_view instance_id) const;

  /// Adds an action node with a content-derived id. Throws
  /// Error("unresolved-filler", role) or Error("bad-process", ...).
  AddActionResult add_action(const ActionComplex& complex, Origin origin);

  /// Creates an empty plan. The id is the slug of `name` (or "plan"), with a
  /// numeric suffix on collision.
  std::string add_plan(Decomposition mode, std::string_view name = {}, std::string label = {});

  /// Adds a typed relation after checking endpoint types, goal uniqueness,
  /// order uniqueness and acyclicity. Sequence sub-actions without an order
  /// get the next free one.
  const RelationEdge& link(RelationKind kind, std::string_view from, std::string_view to,
                           std::optional<int> order = std::nullopt);

  // Unchecked insertion used by loaders and the UI-spec derivation; only id
  // uniqueness is enforced. `validate` reports everything else.
  void insert_action(ActionNode node);
  void insert_plan(PlanNode plan);
  void insert_edge(RelationEdge edge);

  const std::vector<Concept>& concepts() const noexcept { return concepts_; }
  const std::vector<Instance>& instances() const noexcept { return instances_; }
  const std::vector<ActionNode>& actions() const noexcept { return actions_; }
  const std::vector<PlanNode>& plans() const noexcept { return plans_; }
  const std::vector<RelationEdge>& edges() const noexcept { return edges_; }

  // Graph queries. Results are ordered by edge order, then target id, so they
  // do not depend on insertion order.
  std::vector<const RelationEdge*> outgoing(std::string_view from, RelationKind kind) const;
  std::optional<std::string> goal_of(std::string_view plan_id) const;
  /// The plan whose goal is `action_id`, if any (first in id order when the
  /// model is invalid and several exist).
  std::optional<std::string> achiever_of(std::string_view action_id) const;

  /// The id add_action would give `complex` before collision handling.
  std::string action_slug(const ActionComplex& complex) const;

 private:
  std::string unique_node_id(const std::string& base) const;
  void check_fillers(const ActionComplex& complex) const;
  bool reaches(std::string_view from, std::string_view target) const;

  std::vector<Concept> concepts_;
  std::vector<Instance> instances_;
  std::vector<ActionNode> actions_;
  std::vector<PlanNode> plans_;
  std::vector<RelationEdge> edges_;

  std::unordered_map<std::string, std::size_t> concept_index_;
  std::unordered_map<std::string, std::size_t> instance_index_;
  std::unordered_map<std::string, std::size_t> action_index_;
  std::unordered_map<std::string, std::size_t> plan_index_;
};

struct Violation {
  std::string code;
  std::vector<std::string> ids;
  std::string message;

  bool operator==(const Violation&) const = default;
};

/// Checks every model invariant. Violations are data: the list is empty iff
/// the model is well-formed. Pure and deterministic.
std::vector<Violation> validate(const TaskModel& model);

std::string format_violation(const Violation& v);

}  // namespace taskdraft::kb
