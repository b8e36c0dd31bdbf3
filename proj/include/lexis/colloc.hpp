#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "lexis/corpus.hpp"

namespace lexis {

struct FreqReport {
  std::string lemma;
  std::size_t hits = 0;
  double pmw = 0.0;  // full precision; see round_display()
};

// Lemma hits in the view and their rate per million tokens of the view.
// Throws Error{EmptySubcorpus} when the view has no tokens.
FreqReport freq(const Corpus& view, std::string_view lemma);

// 14 + log2(2 f(x,y) / (f(x) + f(y))). Requires 1 <= fPair <= min(fHead, fColl);
// otherwise throws Error{InvalidCounts}.
double logdice(std::size_t f_head, std::size_t f_coll, std::size_t f_pair);

enum class RelationKind { Modifier, SubjectOf, ObjectOf, Window };

std::string_view to_string(RelationKind kind) noexcept;
std::optional<RelationKind> parse_relation(std::string_view name) noexcept;
inline bool is_dependency(RelationKind kind) noexcept { return kind != RelationKind::Window; }

struct RelationOptions {
  int window_span = 5;             // tokens on each side, sentence-bounded
  std::set<std::string> stoplist;  // excluded as window collocates
  bool include_nmod = false;       // count nmod children as modifiers
};

// Window stoplist is the built-in default stoplist.
RelationOptions default_relation_options();

struct Collocation {
  std::string head;
  std::string collocate;
  RelationKind relation = RelationKind::Window;
  std::size_t f_head = 0;
  std::size_t f_coll = 0;
  std::size_t f_pair = 0;
  double logdice = 0.0;

  bool operator==(const Collocation&) const = default;
};

// Collocates of `head` under one relation, counted in the view only.
//
// A pair instance links one head token to one collocate token: a window pair
// is two non-punctuation tokens of the same sentence within `window_span`
// positions, the collocate not on the stoplist; a
// modifier pair is an amod (optionally nmod) child of the head; subject-of and
// object-of pairs link a head token attached as nsubj / obj (dobj) to its VERB
// governor. f_pair is the smaller of the number of distinct head tokens and of
// distinct collocate tokens taking part in such pairs, which keeps it within
// both marginals. Marginals are lemma frequencies over the whole view.
//
// Sorted by logDice, then f_pair (both descending), then collocate. Dependency
// relations on a view without dependency annotation throw
// Error{RelationsUnavailable}.
std::vector<Collocation> collocations(const Corpus& view, std::string_view head,
                                      RelationKind relation, std::size_t min_pair = 1,
                                      const RelationOptions& options = default_relation_options());

struct RelationList {
  RelationKind relation;
  std::vector<Collocation> items;
};

struct WordSketch {
  std::string head;
  std::vector<RelationList> relations;
};

inline const std::vector<RelationKind>& default_sketch_relations() {
  static const std::vector<RelationKind> kinds = {RelationKind::Modifier, RelationKind::SubjectOf,
                                                  RelationKind::ObjectOf};
  return kinds;
}

// Per relation: the top `max_per_relation` collocations, then those scoring
// below `min_score` are dropped.
WordSketch word_sketch(const Corpus& view, std::string_view head, std::size_t max_per_relation = 10,
                       std::optional<double> min_score = std::nullopt,
                       std::span<const RelationKind> relations = default_sketch_relations(),
                       const RelationOptions& options = default_relation_options());

struct SketchDiff {
  std::string head;
  RelationKind relation = RelationKind::Modifier;
  std::string collocate;
  std::optional<double> score_a;  // absent when the pair does not occur in A
  std::optional<double> score_b;
  // score_a - score_b; absent unless both sides are present.
  std::optional<double> delta() const {
    if (!score_a || !score_b) return std::nullopt;
    return *score_a - *score_b;
  }
};

// Union of collocates per relation across two views, ordered by relation then
// collocate. Throws Error{EmptySubcorpus} when either view has no tokens.
std::vector<SketchDiff> sketch_diff(const Corpus& view_a, const Corpus& view_b,
                                    std::string_view head,
                                    std::span<const RelationKind> relations = default_sketch_relations(),
                                    const RelationOptions& options = default_relation_options());

// CSV with header head,relation,collocate,f_head,f_coll,f_pair,logdice.
void write_collocations_csv(std::ostream& out, std::span<const Collocation> rows);

nlohmann::ordered_json to_json(const FreqReport& report);
nlohmann::ordered_json to_json(const Collocation& c);
nlohmann::ordered_json to_json(const WordSketch& sketch);
nlohmann::ordered_json to_json(std::span<const SketchDiff> diff);

// Graph form of a sketch: one node per collocate with a `size` proportional to
// its logDice (size = max(logDice, 0) / 14); nodes below `min_score` are omitted.
nlohmann::ordered_json sketch_graph(const WordSketch& sketch, std::optional<double> min_score);

}  // namespace lexis
