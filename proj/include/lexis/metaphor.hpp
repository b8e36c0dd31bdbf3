#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "lexis/corpus.hpp"
#include "lexis/topics.hpp"

namespace lexis {

struct Lexicon {
  std::string domain;  // e.g. NATURAL_DISASTER
  std::set<std::string> lemmas;
  std::optional<bool> in_metanet;  // recorded as given, never checked
};

// Source-domain lexicons of one language. Domains are disjoint.
class LexiconPack {
 public:
  LexiconPack() = default;
  // Throws Error{MalformedLexicon} or Error{OverlappingDomains}.
  LexiconPack(std::string language, std::vector<Lexicon> domains);

  const std::string& language() const noexcept { return language_; }
  std::span<const Lexicon> domains() const noexcept { return domains_; }
  const Lexicon* domain_of(std::string_view lemma) const;

 private:
  std::string language_;
  std::vector<Lexicon> domains_;
  std::map<std::string, std::size_t, std::less<>> index_;
};

// NATURAL_DISASTER, BUILDING, MACHINE and LIVING_ORGANISM with the Italian
// cue words quoted in the source study. War imagery is deliberately absent.
LexiconPack default_lexicons();

// JSON object mapping each domain to a lemma array, or to
// {"lemmas": [...], "in_metanet": bool}. An optional "language" string key
// sets the language tag (default "it"). Lemmas are lowercased.
LexiconPack parse_lexicons(std::string_view json);
LexiconPack load_lexicons(const std::filesystem::path& path);
nlohmann::ordered_json to_json(const LexiconPack& pack);

class Scope {
 public:
  static Scope sentence() { return Scope(); }
  static Scope window(int n);
  // "sentence", "window:N" or "window(N)". Throws Error{InvalidConfig}.
  static Scope parse(std::string_view s);

  bool is_sentence() const noexcept { return !window_; }
  int width() const noexcept { return window_.value_or(0); }
  std::string str() const;

 private:
  std::optional<int> window_;
};

struct MetaphorCandidate {
  DocumentId doc;
  int sent = 0;
  std::string target;
  int target_offset = 0;
  std::string domain;
  std::string trigger;
  int trigger_offset = 0;
  std::string snippet;  // surface forms spanning target and trigger, with a little context
};

// One candidate per (target token, trigger token) pair in the same sentence,
// and within `scope`. Ordered by document (view order), sentence, target
// offset, trigger offset.
std::vector<MetaphorCandidate> flag_candidates(const Corpus& view,
                                               const std::set<std::string>& targets,
                                               const LexiconPack& lexicons,
                                               Scope scope = Scope::sentence());

struct TopicDomainMatrix {
  std::vector<std::string> topics;   // K names
  std::vector<std::string> domains;  // column order
  std::vector<std::vector<std::size_t>> counts;  // K x domains
  std::vector<std::vector<double>> per_million;  // counts per million tokens of the topic's documents
  std::vector<std::size_t> topic_tokens;         // tokens in documents attributed to each topic

  std::size_t total() const;
};

// Attributes each candidate to the argmax-theta topic of its document (ties:
// lowest index). Columns follow `lexicons` when given, otherwise the sorted
// domains present in `candidates`.
// Throws Error{ModelCorpusMismatch}.
TopicDomainMatrix topic_domain_matrix(std::span<const MetaphorCandidate> candidates,
                                      const TopicModel& model,
                                      const LexiconPack* lexicons = nullptr);

// Argmax of a document's theta row, lowest index on ties.
std::size_t dominant_topic(const TopicModel& model, std::size_t document);

void write_candidates_csv(std::ostream& out, std::span<const MetaphorCandidate> candidates);
nlohmann::ordered_json to_json(std::span<const MetaphorCandidate> candidates);
nlohmann::ordered_json to_json(const TopicDomainMatrix& matrix);

}  // namespace lexis
