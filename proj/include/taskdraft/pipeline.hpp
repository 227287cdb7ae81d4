#pragma once

// Glue shared by the CLI, the service and the tests.

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "taskdraft/cnl.hpp"
#include "taskdraft/kb.hpp"
#include "taskdraft/lexicon.hpp"
#include "taskdraft/realizer.hpp"
#include "taskdraft/uispec.hpp"

namespace taskdraft {

struct Resources {
  kb::TaskModel ontology;
  uispec::RuleTable rules;
  cnl::Grammar grammar;
  std::map<std::string, realizer::Lexicon, std::less<>> lexicons;

  /// Throws Error("unknown-language").
  const realizer::Lexicon& lexicon(std::string_view language) const;
};

/// Everything from the bundled data.
Resources bundled_resources();

/// Replaces the lexicons with <dir>/<lang>.lex for every file found there.
void load_lexicon_dir(Resources& resources, const std::filesystem::path& dir);

/// Plans `goal` once and realizes it in each language, in the given order.
std::vector<realizer::RenderedDoc> draft(const kb::TaskModel& model, std::string_view goal,
                                         const std::vector<std::string>& languages, const Resources& resources,
                                         const realizer::Options& options = {});

std::string read_file(const std::filesystem::path& path);

/// Writes via a temporary sibling and rename, so readers never see a partial
/// file. Throws Error("write-failed").
void write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace taskdraft
