#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "lexis/corpus.hpp"

namespace lexis {

// One position of a token pattern. Empty constraint lists match anything;
// several values are alternatives.
struct PatternSlot {
  std::vector<std::string> lemmas;
  std::vector<Upos> pos;
  std::vector<std::string> words;  // surface forms, compared case-insensitively
  bool optional = false;

  bool accepts(const Token& t) const;
};

// Sequence of slots written as `[lemma="crisi" pos="NOUN"] [lemma="essere|be"] [pos="DET"]? []`.
// Attributes are lemma, pos and word; `|` separates alternatives, `?` marks a
// slot optional, `[]` is a wildcard.
class TokenPattern {
 public:
  explicit TokenPattern(std::vector<PatternSlot> slots);

  // Throws Error{InvalidPattern}.
  static TokenPattern parse(std::string_view source);

  std::span<const PatternSlot> slots() const noexcept { return slots_; }

  // Length of the longest match starting at `start`, bounded by the end of
  // `sentence`.
  std::optional<std::size_t> match_at(std::span<const Token> sentence, std::size_t start) const;

 private:
  std::vector<PatternSlot> slots_;
};

class KwicQuery {
 public:
  enum class Kind { Lemma, Surface, Pattern };

  static KwicQuery lemma(std::string value);
  static KwicQuery surface(std::string value);
  static KwicQuery pattern(TokenPattern p);
  // A string starting with '[' is a pattern; anything else is a lemma.
  static KwicQuery parse(std::string_view q);

  Kind kind() const noexcept { return kind_; }
  const std::string& value() const noexcept { return value_; }
  const std::optional<TokenPattern>& token_pattern() const noexcept { return pattern_; }

 private:
  Kind kind_ = Kind::Lemma;
  std::string value_;
  std::optional<TokenPattern> pattern_;
};

enum class KwicSort { Position, Left, Right };

std::optional<KwicSort> parse_kwic_sort(std::string_view name) noexcept;

struct ConcordanceLine {
  DocumentId doc;
  int sent = 0;
  int offset = 0;  // offset of the first node token
  std::vector<std::string> left;
  std::vector<std::string> node;
  std::vector<std::string> right;
  std::size_t context_width = 0;
};

struct KwicPage {
  std::size_t total = 0;
  std::size_t page = 1;
  std::size_t page_size = 0;
  std::vector<ConcordanceLine> lines;
};

// All matches: sentence-bounded, non-overlapping, leftmost-longest. Context
// comes from the surrounding document, up to `context_width` tokens a side.
// Position order is (document, sentence, offset); the other sorts compare
// lowercased context words outward from the node and fall back to position.
std::vector<ConcordanceLine> kwic_all(const Corpus& view, const KwicQuery& query,
                                      std::size_t context_width = 8,
                                      KwicSort sort = KwicSort::Position);

// One page (1-based) of kwic_all(). Throws Error{InvalidConfig} for page or
// page_size below 1.
KwicPage kwic(const Corpus& view, const KwicQuery& query, std::size_t context_width = 8,
              KwicSort sort = KwicSort::Position, std::size_t page = 1,
              std::size_t page_size = 50);

struct CopulaOptions {
  std::set<std::string> copula_lemmas = {"essere", "be"};
  // Used when the view has no POS tags, where lemmas are just lowercased forms.
  std::set<std::string> copula_forms = {"è",   "e'",     "é",     "era",  "erano", "sono",
                                        "fu",  "furono", "sarà",  "sia",  "siano", "is",
                                        "are", "was",    "were",  "be",   "'s"};
  std::set<std::string> determiners = {"un", "uno", "una", "un'", "il", "lo", "la", "i",
                                       "gli", "le", "l'", "a", "an", "the"};
};

// "X is a Y": a NOUN/PROPN X, a copula, an optional determiner, then Y.
// Without POS tags X is any word token and the copula is matched on forms.
// Returns X lemmas with counts, by count descending then lemma.
std::vector<std::pair<std::string, std::size_t>> copular_pattern(
    const Corpus& view, std::string_view y, const CopulaOptions& options = {});

// TSV with header doc_id, left, node, right; context tokens space-joined.
void write_kwic_tsv(std::ostream& out, std::span<const ConcordanceLine> lines);

nlohmann::ordered_json to_json(const ConcordanceLine& line);
nlohmann::ordered_json to_json(const KwicPage& page);

}  // namespace lexis
