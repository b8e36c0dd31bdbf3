#include "lexis/preprocess.hpp"

#include <fstream>
#include <iostream>
#include <unordered_map>

#include <fmt/format.h>

#include "lexis/error.hpp"
#include "lexis/text.hpp"

namespace lexis {
namespace {

constexpr std::string_view kItalian[] = {
    "a", "ad", "agli", "agl'", "ai", "al", "alla", "alle", "allo", "all'", "anche", "avere",
    "c'", "che", "chi", "ci", "coi", "col", "come", "con", "contro", "cui", "d'", "da", "dagli",
    "dai", "dal", "dalla", "dalle", "dallo", "dall'", "degli", "dei", "del", "della", "delle",
    "dello", "dell'", "di", "dove", "e", "ed", "egli", "essa", "esse", "essere", "essi", "esso",
    "fra", "gli", "i", "il", "in", "io", "l'", "la", "le", "lei", "li", "lo", "loro", "lui",
    "ma", "me", "mi", "mia", "mie", "miei", "mio", "ne", "negli", "nei", "nel", "nella",
    "nelle", "nello", "nell'", "noi", "non", "nostra", "nostre", "nostri", "nostro", "o", "per",
    "perché", "più", "quale", "quali", "quella", "quelle", "quelli", "quello", "questa",
    "queste", "questi", "questo", "se", "si", "sia", "sono", "su", "sua", "sue", "sugli",
    "sui", "sul", "sulla", "sulle", "sullo", "sull'", "suo", "suoi", "ti", "tra", "tu", "tua",
    "tue", "tuo", "tuoi", "un", "un'", "una", "uno", "vi", "voi", "è", "ha", "hanno", "ho",
    "era", "erano", "fu", "stato", "stata", "già", "poi", "così", "solo", "ogni", "tutto",
    "tutti", "tutte", "tutta", "molto", "ancora", "dopo", "prima", "senza", "mentre", "quando",
    "ciò", "cosa", "fare", "fa", "può", "quindi", "oggi"};

constexpr std::string_view kEnglish[] = {
    "a", "an", "and", "are", "as", "at", "be", "been", "but", "by", "for", "from", "had",
    "has", "have", "he", "her", "his", "i", "in", "into", "is", "it", "its", "of", "on", "or",
    "our", "she", "that", "the", "their", "them", "they", "this", "to", "was", "we", "were",
    "which", "who", "will", "with", "you"};

constexpr std::string_view kCorpusSpecific[] = {"coronavirus", "covid", "covid-19", "covid19"};

bool is_punct_token(const Token& t) {
  return t.pos == Upos::PUNCT || t.pos == Upos::SYM || text::is_punctuation(t.surface);
}

bool is_number_token(const Token& t) {
  return t.pos == Upos::NUM || text::is_numeric(t.surface);
}

}  // namespace

std::set<std::string> default_stoplist() {
  std::set<std::string> out;
  for (auto w : kItalian) out.emplace(w);
  for (auto w : kEnglish) out.emplace(w);
  for (auto w : kCorpusSpecific) out.emplace(w);
  return out;
}

std::set<std::string> load_stoplist(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoError, fmt::format("cannot open stoplist {}", path.string()));
  std::set<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) line.pop_back();
    std::size_t start = 0;
    while (start < line.size() && std::isspace(static_cast<unsigned char>(line[start]))) ++start;
    line.erase(0, start);
    if (line.empty() || line.front() == '#') continue;
    out.insert(text::to_lower(line));
  }
  return out;
}

PreprocessConfig default_preprocess_config() {
  PreprocessConfig cfg;
  cfg.stoplist = default_stoplist();
  return cfg;
}

Corpus preprocess(const Corpus& corpus, const PreprocessConfig& cfg, const WarningSink& warn) {
  if (cfg.stem) {
    throw Error(Errc::StemmingUnsupported,
                "stemming is not supported: inflected lemmas are modeled as-is");
  }
  auto emit = [&](std::string_view msg) {
    if (warn) {
      warn(msg);
    } else {
      std::clog << "warning: " << msg << '\n';
    }
  };

  std::vector<std::vector<Token>> kept(corpus.size());
  std::unordered_map<std::string, std::size_t> freq;
  for (std::size_t d = 0; d < corpus.size(); ++d) {
    for (const auto& t : corpus.doc(d).tokens()) {
      Token copy = t;
      if (cfg.lowercase) copy.lemma = text::to_lower(copy.lemma);
      if (cfg.drop_punctuation && is_punct_token(copy)) continue;
      if (cfg.drop_numbers && is_number_token(copy)) continue;
      if (cfg.stoplist.contains(copy.lemma)) continue;
      ++freq[copy.lemma];
      kept[d].push_back(std::move(copy));
    }
  }
  if (cfg.drop_hapax) {
    for (auto& tokens : kept) {
      std::erase_if(tokens, [&](const Token& t) { return freq[t.lemma] == 1; });
    }
  }

  std::vector<Document> docs;
  for (std::size_t d = 0; d < corpus.size(); ++d) {
    auto& tokens = kept[d];
    if (tokens.empty()) {
      emit(fmt::format("document {} is empty after preprocessing and was dropped",
                       corpus.doc(d).id().str()));
      continue;
    }
    // Clear heads whose governor did not survive.
    std::size_t begin = 0;
    while (begin < tokens.size()) {
      std::size_t end = begin;
      while (end < tokens.size() && tokens[end].sent == tokens[begin].sent) ++end;
      for (std::size_t i = begin; i < end; ++i) {
        auto& head = tokens[i].head;
        if (!head || *head == 0) continue;
        bool found = false;
        for (std::size_t j = begin; j < end && !found; ++j) found = tokens[j].id == *head;
        if (!found) head.reset();
      }
      begin = end;
    }
    const auto& src = corpus.doc(d);
    docs.emplace_back(src.id(), std::move(tokens), src.source());
  }
  return Corpus::from_documents(std::move(docs));
}

}  // namespace lexis
