#pragma once

// Default resources compiled into the library: the ontology, derivation
// rules, CNL grammar and the en/fr lexicons from data/.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace taskdraft::bundled {

std::string_view ontology();
std::string_view rules();
std::string_view grammar();
std::optional<std::string_view> lexicon(std::string_view language);
std::vector<std::string> languages();

}  // namespace taskdraft::bundled
