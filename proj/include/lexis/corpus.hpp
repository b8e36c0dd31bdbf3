#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "lexis/document_id.hpp"

namespace lexis {

enum class Upos : std::uint8_t {
  ADJ, ADP, ADV, AUX, CCONJ, DET, INTJ, NOUN, NUM, PART, PRON, PROPN, PUNCT,
  SCONJ, SYM, VERB, X, UNKNOWN
};

std::string_view to_string(Upos pos) noexcept;
// Unrecognized tags (and "_") map to UNKNOWN.
Upos parse_upos(std::string_view tag) noexcept;

struct Token {
  std::string surface;
  std::string lemma;
  Upos pos = Upos::UNKNOWN;
  int id = 0;               // 1-based position inside its sentence (CoNLL-U ID)
  std::optional<int> head;  // sentence-local id of the governor, 0 = root
  std::string deprel;       // empty when absent
  int sent = 0;
  int offset = 0;           // position in the original document

  bool operator==(const Token&) const = default;
};

struct SentenceSpan {
  std::size_t begin = 0;
  std::size_t end = 0;  // exclusive
};

class Document {
 public:
  // Validates token invariants (non-empty, strictly increasing offsets,
  // heads pointing inside the sentence) and throws Error otherwise.
  Document(DocumentId id, std::vector<Token> tokens, std::optional<std::string> source = {});

  const DocumentId& id() const noexcept { return id_; }
  const std::optional<std::string>& source() const noexcept { return source_; }
  std::span<const Token> tokens() const noexcept { return tokens_; }
  std::span<const SentenceSpan> sentences() const noexcept { return sentences_; }
  std::size_t size() const noexcept { return tokens_.size(); }

  // Index into tokens() of the token with sentence-local `id` in the sentence
  // containing `sentence_index`, if it survives.
  std::optional<std::size_t> find_in_sentence(std::size_t sentence_index, int id) const;

  bool operator==(const Document& other) const {
    return id_ == other.id_ && tokens_ == other.tokens_ && source_ == other.source_;
  }

 private:
  DocumentId id_;
  std::vector<Token> tokens_;
  std::optional<std::string> source_;
  std::vector<SentenceSpan> sentences_;
};

struct TokenRef {
  std::uint32_t doc = 0;
  std::uint32_t token = 0;

  auto operator<=>(const TokenRef&) const = default;
};

// A conjunction of metadata conditions, optionally complemented.
class SubcorpusFilter {
 public:
  SubcorpusFilter() = default;

  // Grammar: key=value[,key=value] with keys phase|week|month. A week value may
  // be a single number or an inclusive range "lo-hi". Empty string matches all.
  static SubcorpusFilter parse(std::string_view expr);

  SubcorpusFilter& phase(int p);
  SubcorpusFilter& weeks(int lo, int hi);
  SubcorpusFilter& month(Month m);

  SubcorpusFilter complement() const;
  bool matches(const DocumentId& id) const;
  std::string str() const;

 private:
  std::optional<int> phase_;
  std::optional<std::pair<int, int>> weeks_;
  std::optional<Month> month_;
  bool negated_ = false;
};

// Immutable collection of shared documents with lemma indexes. Subcorpus views
// share the documents of their parent.
class Corpus {
 public:
  Corpus() = default;
  explicit Corpus(std::vector<std::shared_ptr<const Document>> docs);
  static Corpus from_documents(std::vector<Document> docs);

  std::size_t size() const noexcept { return docs_.size(); }
  bool empty() const noexcept { return docs_.empty(); }
  const Document& doc(std::size_t i) const { return *docs_[i]; }
  std::span<const std::shared_ptr<const Document>> documents() const noexcept { return docs_; }
  const Token& token(TokenRef ref) const { return docs_[ref.doc]->tokens()[ref.token]; }

  std::size_t token_count() const noexcept { return token_count_; }
  // Any token carries a dependency relation.
  bool tagged() const noexcept { return tagged_; }
  // Any token carries a part-of-speech tag.
  bool pos_tagged() const noexcept { return pos_tagged_; }

  // Lemmas in lexicographic order; the index is the lemma id.
  std::span<const std::string> vocabulary() const noexcept { return vocabulary_; }
  std::optional<std::uint32_t> lemma_id(std::string_view lemma) const;
  std::size_t lemma_frequency(std::string_view lemma) const;
  std::size_t lemma_frequency(std::uint32_t id) const { return lemma_freq_[id]; }
  // Per-document counts of a lemma as (document index, count), ascending.
  std::span<const std::pair<std::uint32_t, std::uint32_t>> postings(std::uint32_t id) const {
    return postings_[id];
  }
  // Every occurrence of a lemma in corpus order.
  std::span<const TokenRef> occurrences(std::uint32_t id) const { return occurrences_[id]; }
  std::span<const TokenRef> occurrences(std::string_view lemma) const;

  Corpus subcorpus(const SubcorpusFilter& filter) const;

 private:
  std::vector<std::shared_ptr<const Document>> docs_;
  std::vector<std::string> vocabulary_;
  std::unordered_map<std::string, std::uint32_t> lemma_ids_;
  std::vector<std::size_t> lemma_freq_;
  std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> postings_;
  std::vector<std::vector<TokenRef>> occurrences_;
  std::size_t token_count_ = 0;
  bool tagged_ = false;
  bool pos_tagged_ = false;
};

}  // namespace lexis
