#pragma once

#include <filesystem>
#include <functional>
#include <set>
#include <string>
#include <string_view>

#include "lexis/corpus.hpp"

namespace lexis {

struct PreprocessConfig {
  std::set<std::string> stoplist;
  bool drop_punctuation = true;
  bool drop_numbers = true;
  bool drop_hapax = true;
  bool lowercase = true;
  bool stem = false;  // unsupported; preprocess() rejects it
};

// Built-in Italian/English function words plus 'coronavirus' and 'covid'.
std::set<std::string> default_stoplist();

// One lemma per line, UTF-8; blank lines and '#' comments are ignored.
// Entries are lowercased.
std::set<std::string> load_stoplist(const std::filesystem::path& path);

PreprocessConfig default_preprocess_config();

using WarningSink = std::function<void(std::string_view)>;

// Lowercases lemmas, drops stoplist/punctuation/number tokens, then hapax
// lemmas (frequency 1 over what remains). Documents left empty are dropped
// and reported through `warn` (stderr when unset). Dependency heads that
// point at removed tokens are cleared.
Corpus preprocess(const Corpus& corpus, const PreprocessConfig& cfg, const WarningSink& warn = {});

}  // namespace lexis
