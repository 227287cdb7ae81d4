#pragma once

// One open knowledge base behind the authoring API. Requests are plain
// (method, path, query, body) tuples so the routing and the JSON contract
// can be exercised without a socket; http_server.hpp binds them to HTTP.
//
// Endpoints (JSON bodies; every response carries "revision"):
//
//   GET  /model            kb text, actions, plans, edges, journal
//   GET  /graph[?format=dot|json]
//   GET  /validate         {valid, violations:[{code, ids, message}]}
//   POST /cnl/expansions   {pattern, slot}          -> {expansions, replacements}
//   POST /cnl/default      {pattern}                -> {sentence, complete}
//   POST /action           {sentence, revision}     -> {id, duplicate, delta}
//   POST /plan             {mode, name?, label?, revision} -> {id, delta}
//   POST /link             {kind, from, to, order?, revision} -> {delta}
//   POST /draft            {goal, languages, accented?} -> {documents:[...]}
//   POST /save             {}                       -> {path}
//
// Status codes: 400 malformed body, 404 unknown node or route, 409 stale
// revision, 422 domain error. Error bodies are {error, detail}.

#include <cstdint>
#include <filesystem>
#include <map>
#include <shared_mutex>
#include <string>

#include <json.hpp>

#include "taskdraft/kb.hpp"
#include "taskdraft/pipeline.hpp"
#include "taskdraft/script.hpp"

namespace taskdraft::service {

struct Request {
  std::string method;
  std::string path;
  std::map<std::string, std::string> query;
  std::string body;
};

struct Response {
  int status = 200;
  nlohmann::ordered_json body;
};

class Session {
 public:
  /// `save_path` is where POST /save writes; empty disables saving.
  Session(kb::TaskModel model, Resources resources, std::filesystem::path save_path = {});

  /// Thread-safe: reads run concurrently, mutations one at a time.
  Response handle(const Request& request);

  std::uint64_t revision() const;
  /// Successful mutations so far, as a replayable author script.
  script::AuthorScript journal() const;
  kb::TaskModel model() const;

 private:
  using Json = nlohmann::ordered_json;

  Response get_model() const;
  Response get_graph(const Request& r) const;
  Response get_validate() const;
  Response post_expansions(const Json& body) const;
  Response post_default(const Json& body) const;
  Response post_draft(const Json& body) const;
  Response mutate(const Json& body, script::Command command);
  Response post_save();

  Json action_json(const kb::ActionNode& a) const;

  mutable std::shared_mutex mutex_;
  kb::TaskModel model_;
  Resources resources_;
  std::filesystem::path save_path_;
  std::uint64_t revision_ = 0;
  script::AuthorScript journal_;
};

}  // namespace taskdraft::service
