#include "taskdraft/pipeline.hpp"

#include <fstream>
#include <sstream>

#include "taskdraft/bundled.hpp"
#include "taskdraft/error.hpp"
#include "taskdraft/kb_io.hpp"
#include "taskdraft/planner.hpp"

namespace taskdraft {

const realizer::Lexicon& Resources::lexicon(std::string_view language) const {
  auto it = lexicons.find(language);
  if (it == lexicons.end()) throw Error("unknown-language", std::string(language));
  return it->second;
}

Resources bundled_resources() {
  Resources r;
  r.ontology = kb::parse_kb(bundled::ontology());
  r.rules = uispec::parse_rules(bundled::rules());
  r.grammar = cnl::parse_grammar(bundled::grammar());
  for (const auto& lang : bundled::languages()) {
    r.lexicons.emplace(lang, realizer::Lexicon::parse(*bundled::lexicon(lang)));
  }
  return r;
}

void load_lexicon_dir(Resources& resources, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::directory_iterator it(dir, ec);
  if (ec) throw Error("read-failed", dir.string() + ": " + ec.message());
  for (const auto& entry : it) {
    if (entry.path().extension() != ".lex") continue;
    auto lex = realizer::Lexicon::parse(read_file(entry.path()));
    std::string lang = lex.language();
    resources.lexicons.insert_or_assign(lang, std::move(lex));
  }
}

std::vector<realizer::RenderedDoc> draft(const kb::TaskModel& model, std::string_view goal,
                                         const std::vector<std::string>& languages, const Resources& resources,
                                         const realizer::Options& options) {
  planner::DocPlan plan = planner::plan_document(model, goal);
  std::vector<realizer::RenderedDoc> out;
  for (const auto& lang : languages) {
    out.push_back(realizer::realize_document(plan, model, resources.lexicon(lang), options));
  }
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("read-failed", path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("write-failed", path.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error("write-failed", path.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error("write-failed", path.string());
  }
}

}  // namespace taskdraft
