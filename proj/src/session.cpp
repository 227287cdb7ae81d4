#include "taskdraft/session.hpp"

#include <mutex>

#include "taskdraft/cnl.hpp"
#include "taskdraft/error.hpp"
#include "taskdraft/graph.hpp"
#include "taskdraft/kb_io.hpp"

namespace taskdraft::service {

namespace {

using Json = nlohmann::ordered_json;

struct BadRequest {
  std::string detail;
};

Response error(int status, const std::string& code, const std::string& detail) {
  Json body;
  body["error"] = code;
  body["detail"] = detail;
  return {status, std::move(body)};
}

Response domain_error(const Error& e) { return error(e.code() == "unknown-node" ? 404 : 422, e.code(), e.detail()); }

Json parse_body(const std::string& text) {
  if (text.empty()) return Json::object();
  Json j = Json::parse(text, nullptr, false);
  if (j.is_discarded()) throw BadRequest{"body is not valid JSON"};
  if (!j.is_object()) throw BadRequest{"body must be a JSON object"};
  return j;
}

std::string get_string(const Json& body, const char* key) {
  auto it = body.find(key);
  if (it == body.end() || !it->is_string()) throw BadRequest{std::string("'") + key + "' must be a string"};
  return it->get<std::string>();
}

std::string get_optional_string(const Json& body, const char* key) {
  auto it = body.find(key);
  if (it == body.end() || it->is_null()) return {};
  if (!it->is_string()) throw BadRequest{std::string("'") + key + "' must be a string"};
  return it->get<std::string>();
}

std::optional<std::int64_t> get_optional_int(const Json& body, const char* key) {
  auto it = body.find(key);
  if (it == body.end() || it->is_null()) return std::nullopt;
  if (!it->is_number_integer()) throw BadRequest{std::string("'") + key + "' must be an integer"};
  return it->get<std::int64_t>();
}

std::int64_t get_int(const Json& body, const char* key) {
  auto v = get_optional_int(body, key);
  if (!v) throw BadRequest{std::string("'") + key + "' is required"};
  return *v;
}

Json edge_json(const kb::RelationEdge& e) {
  Json j;
  j["kind"] = kb::to_string(e.kind);
  j["from"] = e.from;
  j["to"] = e.to;
  if (e.order) j["order"] = *e.order;
  return j;
}

Json plan_json(const kb::PlanNode& p) {
  Json j;
  j["id"] = p.id;
  j["mode"] = kb::to_string(p.mode);
  j["label"] = p.label;
  return j;
}

Json violation_json(const kb::Violation& v) {
  Json j;
  j["code"] = v.code;
  j["ids"] = v.ids;
  j["message"] = v.message;
  return j;
}

}  // namespace

Session::Session(kb::TaskModel model, Resources resources, std::filesystem::path save_path)
    : model_(std::move(model)), resources_(std::move(resources)), save_path_(std::move(save_path)) {}

std::uint64_t Session::revision() const {
  std::shared_lock lock(mutex_);
  return revision_;
}

script::AuthorScript Session::journal() const {
  std::shared_lock lock(mutex_);
  return journal_;
}

kb::TaskModel Session::model() const {
  std::shared_lock lock(mutex_);
  return model_;
}

Response Session::handle(const Request& r) {
  try {
    const std::string& m = r.method;
    const std::string& p = r.path;
    bool get = m == "GET";
    bool post = m == "POST";

    if (p == "/model" && get) {
      std::shared_lock lock(mutex_);
      return get_model();
    }
    if (p == "/graph" && get) {
      std::shared_lock lock(mutex_);
      return get_graph(r);
    }
    if (p == "/validate" && get) {
      std::shared_lock lock(mutex_);
      return get_validate();
    }
    if (p == "/cnl/expansions" && post) {
      Json body = parse_body(r.body);
      std::shared_lock lock(mutex_);
      return post_expansions(body);
    }
    if (p == "/cnl/default" && post) {
      Json body = parse_body(r.body);
      std::shared_lock lock(mutex_);
      return post_default(body);
    }
    if (p == "/draft" && post) {
      Json body = parse_body(r.body);
      std::shared_lock lock(mutex_);
      return post_draft(body);
    }
    if (p == "/action" && post) {
      Json body = parse_body(r.body);
      return mutate(body, script::AddAction{get_string(body, "sentence")});
    }
    if (p == "/plan" && post) {
      Json body = parse_body(r.body);
      script::AddPlan cmd;
      auto mode = kb::parse_decomposition(get_string(body, "mode"));
      if (!mode) throw BadRequest{"'mode' must be sequence or choice"};
      cmd.mode = *mode;
      cmd.name = get_optional_string(body, "name");
      cmd.label = get_optional_string(body, "label");
      return mutate(body, cmd);
    }
    if (p == "/link" && post) {
      Json body = parse_body(r.body);
      script::Link cmd;
      auto kind = kb::parse_relation_kind(get_string(body, "kind"));
      if (!kind) throw BadRequest{"unknown relation 'kind'"};
      cmd.kind = *kind;
      cmd.from = get_string(body, "from");
      cmd.to = get_string(body, "to");
      if (auto o = get_optional_int(body, "order")) cmd.order = static_cast<int>(*o);
      return mutate(body, cmd);
    }
    if (p == "/save" && post) {
      std::unique_lock lock(mutex_);
      return post_save();
    }
    static const char* known[] = {"/model",        "/graph",  "/validate", "/cnl/expansions", "/cnl/default",
                                  "/draft",        "/action", "/plan",     "/link",           "/save"};
    for (const char* k : known) {
      if (p == k) return error(405, "method-not-allowed", m + " " + p);
    }
    return error(404, "not-found", p);
  } catch (const BadRequest& e) {
    return error(400, "bad-request", e.detail);
  } catch (const Error& e) {
    return domain_error(e);
  }
}

Session::Json Session::action_json(const kb::ActionNode& a) const {
  Json j;
  j["id"] = a.id;
  j["process"] = a.complex.process;
  j["actor"] = a.complex.actor;
  if (a.complex.actee_open) j["actee"] = nullptr;
  else if (a.complex.actee) j["actee"] = *a.complex.actee;
  if (a.complex.location) j["location"] = *a.complex.location;
  if (a.complex.source) j["source"] = *a.complex.source;
  if (a.complex.means) j["means"] = *a.complex.means;
  j["origin"] = kb::to_string(a.origin);
  j["effect"] = a.is_effect();
  try {
    j["sentence"] = cnl::Engine(resources_.grammar, model_).render(a.complex);
  } catch (const Error&) {
    j["sentence"] = nullptr;
  }
  return j;
}

Response Session::get_model() const {
  Json body;
  body["revision"] = revision_;
  body["kb"] = kb::serialize(model_);
  Json actions = Json::array();
  for (const auto& a : model_.actions()) actions.push_back(action_json(a));
  Json plans = Json::array();
  for (const auto& p : model_.plans()) plans.push_back(plan_json(p));
  Json edges = Json::array();
  for (const auto& e : model_.edges()) edges.push_back(edge_json(e));
  body["actions"] = std::move(actions);
  body["plans"] = std::move(plans);
  body["edges"] = std::move(edges);
  body["journal"] = script::serialize(journal_);
  return {200, std::move(body)};
}

Response Session::get_graph(const Request& r) const {
  std::string format = "dot";
  if (auto it = r.query.find("format"); it != r.query.end()) format = it->second;
  Json body;
  body["revision"] = revision_;
  body["format"] = format;
  if (format == "dot") {
    body["graph"] = graph::to_dot(model_);
  } else if (format == "json") {
    body["graph"] = Json::parse(graph::to_json(model_));
  } else {
    throw BadRequest{"format must be dot or json"};
  }
  return {200, std::move(body)};
}

Response Session::get_validate() const {
  Json body;
  body["revision"] = revision_;
  auto violations = kb::validate(model_);
  body["valid"] = violations.empty();
  Json list = Json::array();
  for (const auto& v : violations) list.push_back(violation_json(v));
  body["violations"] = std::move(list);
  return {200, std::move(body)};
}

Response Session::post_expansions(const Json& body) const {
  std::string text = get_string(body, "pattern");
  auto slot = get_int(body, "slot");
  if (slot < 0) throw BadRequest{"'slot' must be non-negative"};
  cnl::Engine engine(resources_.grammar, model_);
  cnl::Pattern pattern = cnl::parse_pattern(text, model_);
  auto expansions = engine.expansions(pattern, static_cast<std::size_t>(slot));

  // Where the slot sits, so each expansion can also be shown as just the
  // words or slots that replace it.
  std::size_t at = 0;
  for (std::size_t seen = 0; at < pattern.tokens.size(); ++at) {
    if (std::holds_alternative<cnl::Slot>(pattern.tokens[at]) && seen++ == static_cast<std::size_t>(slot)) break;
  }
  std::size_t tail = pattern.tokens.size() - at - 1;

  Json list = Json::array();
  Json replacements = Json::array();
  for (const auto& e : expansions) {
    list.push_back(e.surface());
    cnl::Pattern middle;
    middle.tokens.assign(e.tokens.begin() + static_cast<long>(at), e.tokens.end() - static_cast<long>(tail));
    replacements.push_back(middle.surface());
  }
  Json out;
  out["revision"] = revision_;
  out["pattern"] = pattern.surface();
  out["slot"] = slot;
  out["expansions"] = std::move(list);
  out["replacements"] = std::move(replacements);
  return {200, std::move(out)};
}

Response Session::post_default(const Json& body) const {
  std::string text = get_string(body, "pattern");
  cnl::Engine engine(resources_.grammar, model_);
  cnl::GroundSentence s = engine.default_completion(cnl::parse_pattern(text, model_));
  Json out;
  out["revision"] = revision_;
  out["sentence"] = s.text();
  out["complete"] = s.complex.has_value();
  return {200, std::move(out)};
}

Response Session::post_draft(const Json& body) const {
  std::string goal = get_string(body, "goal");
  std::vector<std::string> languages;
  auto it = body.find("languages");
  if (it == body.end() || !it->is_array() || it->empty()) throw BadRequest{"'languages' must be a non-empty array"};
  for (const auto& l : *it) {
    if (!l.is_string()) throw BadRequest{"'languages' must hold strings"};
    languages.push_back(l.get<std::string>());
  }
  realizer::Options options;
  if (auto a = body.find("accented"); a != body.end()) {
    if (!a->is_boolean()) throw BadRequest{"'accented' must be a boolean"};
    options.accented = a->get<bool>();
  }

  Json docs = Json::array();
  for (const auto& doc : draft(model_, goal, languages, resources_, options)) {
    Json d;
    d["language"] = doc.language;
    d["text"] = doc.text;
    Json spans = Json::array();
    for (const auto& s : doc.provenance) {
      Json j;
      j["start"] = s.start;
      j["end"] = s.end;
      j["node"] = s.node;
      j["kind"] = s.kind;
      spans.push_back(std::move(j));
    }
    d["provenance"] = std::move(spans);
    docs.push_back(std::move(d));
  }
  Json out;
  out["revision"] = revision_;
  out["goal"] = goal;
  out["documents"] = std::move(docs);
  return {200, std::move(out)};
}

Response Session::mutate(const Json& body, script::Command command) {
  auto seen = get_int(body, "revision");
  std::unique_lock lock(mutex_);
  if (seen < 0 || static_cast<std::uint64_t>(seen) != revision_) {
    Response r = error(409, "stale-revision", "client has " + std::to_string(seen) + ", server has " +
                                                  std::to_string(revision_));
    r.body["revision"] = revision_;
    return r;
  }

  std::size_t actions_before = model_.actions().size();
  std::size_t plans_before = model_.plans().size();
  std::size_t edges_before = model_.edges().size();
  script::CommandResult result = script::apply_command(model_, resources_.grammar, command);

  Json delta;
  Json actions = Json::array();
  for (std::size_t i = actions_before; i < model_.actions().size(); ++i) actions.push_back(action_json(model_.actions()[i]));
  Json plans = Json::array();
  for (std::size_t i = plans_before; i < model_.plans().size(); ++i) plans.push_back(plan_json(model_.plans()[i]));
  Json edges = Json::array();
  for (std::size_t i = edges_before; i < model_.edges().size(); ++i) edges.push_back(edge_json(model_.edges()[i]));
  delta["actions"] = std::move(actions);
  delta["plans"] = std::move(plans);
  delta["edges"] = std::move(edges);

  if (!result.duplicate) {
    ++revision_;
    journal_.commands.push_back(std::move(command));
  }
  Json out;
  out["revision"] = revision_;
  out["id"] = result.id;
  out["duplicate"] = result.duplicate;
  out["delta"] = std::move(delta);
  return {200, std::move(out)};
}

Response Session::post_save() {
  if (save_path_.empty()) return error(422, "no-save-path", "session was opened without a file");
  try {
    write_file(save_path_, kb::serialize(model_));
  } catch (const Error& e) {
    return error(500, e.code(), e.detail());
  }
  Json out;
  out["revision"] = revision_;
  out["path"] = save_path_.string();
  return {200, std::move(out)};
}

}  // namespace taskdraft::service
