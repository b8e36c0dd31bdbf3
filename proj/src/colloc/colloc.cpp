#include "lexis/colloc.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>

#include <fmt/format.h>

#include "lexis/csv.hpp"
#include "lexis/display.hpp"
#include "lexis/error.hpp"
#include "lexis/preprocess.hpp"
#include "lexis/text.hpp"

namespace lexis {
namespace {

std::string_view base_deprel(std::string_view deprel) {
  return deprel.substr(0, deprel.find(':'));
}

bool is_punct(const Token& t) {
  return t.pos == Upos::PUNCT || t.pos == Upos::SYM || text::is_punctuation(t.surface);
}

std::size_t sentence_of(const Document& doc, std::size_t token) {
  const auto spans = doc.sentences();
  const auto it = std::upper_bound(spans.begin(), spans.end(), token,
                                   [](std::size_t t, const SentenceSpan& s) { return t < s.begin; });
  return static_cast<std::size_t>(it - spans.begin()) - 1;
}

// Distinct head and collocate tokens taking part in pairs, per collocate lemma.
struct PairTally {
  std::set<TokenRef> heads;
  std::set<TokenRef> collocates;
};

void require_relations(const Corpus& view, RelationKind relation) {
  if (is_dependency(relation) && !view.empty() && !view.tagged()) {
    throw Error(Errc::RelationsUnavailable,
                fmt::format("relation '{}' needs dependency-annotated (CoNLL-U) input",
                            to_string(relation)));
  }
}

bool is_subject(std::string_view deprel) {
  return base_deprel(deprel) == "nsubj" && deprel != "nsubj:pass";
}

bool is_object(std::string_view deprel) {
  const auto base = base_deprel(deprel);
  return base == "obj" || base == "dobj";
}

}  // namespace

FreqReport freq(const Corpus& view, std::string_view lemma) {
  if (view.token_count() == 0) {
    throw Error(Errc::EmptySubcorpus, "frequency requested on an empty subcorpus");
  }
  FreqReport r;
  r.lemma = std::string(lemma);
  r.hits = view.lemma_frequency(lemma);
  r.pmw = static_cast<double>(r.hits) * 1e6 / static_cast<double>(view.token_count());
  return r;
}

double logdice(std::size_t f_head, std::size_t f_coll, std::size_t f_pair) {
  if (f_pair < 1 || f_pair > f_head || f_pair > f_coll) {
    throw Error(Errc::InvalidCounts,
                fmt::format("logDice needs 1 <= f_pair <= min(f_head, f_coll); got ({}, {}, {})",
                            f_head, f_coll, f_pair));
  }
  return 14.0 + std::log2(2.0 * static_cast<double>(f_pair) /
                          (static_cast<double>(f_head) + static_cast<double>(f_coll)));
}

std::string_view to_string(RelationKind kind) noexcept {
  switch (kind) {
    case RelationKind::Modifier: return "modifier";
    case RelationKind::SubjectOf: return "subject-of";
    case RelationKind::ObjectOf: return "object-of";
    case RelationKind::Window: return "window";
  }
  return "window";
}

std::optional<RelationKind> parse_relation(std::string_view name) noexcept {
  for (auto k : {RelationKind::Modifier, RelationKind::SubjectOf, RelationKind::ObjectOf,
                 RelationKind::Window}) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

RelationOptions default_relation_options() {
  RelationOptions o;
  o.stoplist = default_stoplist();
  return o;
}

std::vector<Collocation> collocations(const Corpus& view, std::string_view head,
                                      RelationKind relation, std::size_t min_pair,
                                      const RelationOptions& options) {
  require_relations(view, relation);
  const auto head_id = view.lemma_id(head);
  if (!head_id) return {};

  std::map<std::string, PairTally> tally;
  for (const TokenRef ref : view.occurrences(*head_id)) {
    const Document& doc = view.doc(ref.doc);
    const auto tokens = doc.tokens();
    const Token& h = tokens[ref.token];
    const std::size_t s = sentence_of(doc, ref.token);
    const SentenceSpan span = doc.sentences()[s];
    auto add = [&](std::size_t coll) {
      auto& t = tally[tokens[coll].lemma];
      t.heads.insert(ref);
      t.collocates.insert({ref.doc, static_cast<std::uint32_t>(coll)});
    };

    switch (relation) {
      case RelationKind::Window:
        if (is_punct(h)) break;
        for (std::size_t j = span.begin; j < span.end; ++j) {
          const Token& c = tokens[j];
          if (j == ref.token || std::abs(c.offset - h.offset) > options.window_span) continue;
          if (c.lemma == h.lemma || is_punct(c) || options.stoplist.contains(c.lemma)) continue;
          add(j);
        }
        break;
      case RelationKind::Modifier:
        for (std::size_t j = span.begin; j < span.end; ++j) {
          const Token& c = tokens[j];
          if (j == ref.token || !c.head || *c.head != h.id) continue;
          const auto base = base_deprel(c.deprel);
          if (base == "amod" || (options.include_nmod && base == "nmod")) add(j);
        }
        break;
      case RelationKind::SubjectOf:
      case RelationKind::ObjectOf: {
        const bool wanted =
            relation == RelationKind::SubjectOf ? is_subject(h.deprel) : is_object(h.deprel);
        if (!wanted || !h.head || *h.head == 0) break;
        const auto gov = doc.find_in_sentence(s, *h.head);
        if (gov && tokens[*gov].pos == Upos::VERB) add(*gov);
        break;
      }
    }
  }

  const std::size_t f_head = view.lemma_frequency(*head_id);
  std::vector<Collocation> out;
  for (const auto& [lemma, t] : tally) {
    const std::size_t f_pair = std::min(t.heads.size(), t.collocates.size());
    if (f_pair < std::max<std::size_t>(min_pair, 1)) continue;
    Collocation c;
    c.head = std::string(head);
    c.collocate = lemma;
    c.relation = relation;
    c.f_head = f_head;
    c.f_coll = view.lemma_frequency(lemma);
    c.f_pair = f_pair;
    c.logdice = logdice(c.f_head, c.f_coll, c.f_pair);
    out.push_back(std::move(c));
  }
  std::sort(out.begin(), out.end(), [](const Collocation& a, const Collocation& b) {
    if (a.logdice != b.logdice) return a.logdice > b.logdice;
    if (a.f_pair != b.f_pair) return a.f_pair > b.f_pair;
    return a.collocate < b.collocate;
  });
  return out;
}

WordSketch word_sketch(const Corpus& view, std::string_view head, std::size_t max_per_relation,
                       std::optional<double> min_score, std::span<const RelationKind> relations,
                       const RelationOptions& options) {
  for (auto r : relations) require_relations(view, r);
  WordSketch sketch;
  sketch.head = std::string(head);
  for (auto r : relations) {
    auto items = collocations(view, head, r, 1, options);
    if (items.size() > max_per_relation) items.resize(max_per_relation);
    if (min_score) {
      std::erase_if(items, [&](const Collocation& c) { return c.logdice < *min_score; });
    }
    sketch.relations.push_back({r, std::move(items)});
  }
  return sketch;
}

std::vector<SketchDiff> sketch_diff(const Corpus& view_a, const Corpus& view_b,
                                    std::string_view head, std::span<const RelationKind> relations,
                                    const RelationOptions& options) {
  if (view_a.token_count() == 0 || view_b.token_count() == 0) {
    throw Error(Errc::EmptySubcorpus, "sketch difference needs two non-empty subcorpora");
  }
  std::vector<SketchDiff> out;
  for (auto r : relations) {
    std::map<std::string, SketchDiff> merged;
    for (const auto& c : collocations(view_a, head, r, 1, options)) {
      auto& d = merged[c.collocate];
      d.score_a = c.logdice;
    }
    for (const auto& c : collocations(view_b, head, r, 1, options)) {
      auto& d = merged[c.collocate];
      d.score_b = c.logdice;
    }
    for (auto& [collocate, d] : merged) {
      d.head = std::string(head);
      d.relation = r;
      d.collocate = collocate;
      out.push_back(std::move(d));
    }
  }
  return out;
}

void write_collocations_csv(std::ostream& out, std::span<const Collocation> rows) {
  out << "head,relation,collocate,f_head,f_coll,f_pair,logdice\n";
  for (const auto& c : rows) {
    csv::write_row(out, {c.head, std::string(to_string(c.relation)), c.collocate,
                         std::to_string(c.f_head), std::to_string(c.f_coll),
                         std::to_string(c.f_pair), fixed2(c.logdice)});
  }
}

nlohmann::ordered_json to_json(const FreqReport& report) {
  nlohmann::ordered_json j;
  j["hits"] = report.hits;
  j["pmw"] = round_display(report.pmw);
  return j;
}

nlohmann::ordered_json to_json(const Collocation& c) {
  nlohmann::ordered_json j;
  j["collocate"] = c.collocate;
  j["f_head"] = c.f_head;
  j["f_coll"] = c.f_coll;
  j["f_pair"] = c.f_pair;
  j["logdice"] = round_display(c.logdice);
  return j;
}

nlohmann::ordered_json to_json(const WordSketch& sketch) {
  nlohmann::ordered_json j;
  j["head"] = sketch.head;
  auto& rels = j["relations"] = nlohmann::ordered_json::array();
  for (const auto& r : sketch.relations) {
    nlohmann::ordered_json items = nlohmann::ordered_json::array();
    for (const auto& c : r.items) items.push_back(to_json(c));
    rels.push_back({{"relation", to_string(r.relation)}, {"collocates", std::move(items)}});
  }
  return j;
}

nlohmann::ordered_json to_json(std::span<const SketchDiff> diff) {
  auto opt = [](const std::optional<double>& v) {
    return v ? nlohmann::ordered_json(round_display(*v)) : nlohmann::ordered_json(nullptr);
  };
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& d : diff) {
    nlohmann::ordered_json j;
    j["relation"] = to_string(d.relation);
    j["collocate"] = d.collocate;
    j["score_a"] = opt(d.score_a);
    j["score_b"] = opt(d.score_b);
    j["delta"] = opt(d.delta());
    j["present"] = d.score_a && d.score_b ? "both" : (d.score_a ? "a" : "b");
    rows.push_back(std::move(j));
  }
  return rows;
}

nlohmann::ordered_json sketch_graph(const WordSketch& sketch, std::optional<double> min_score) {
  nlohmann::ordered_json j;
  j["head"] = sketch.head;
  j["min_score"] = min_score ? nlohmann::ordered_json(*min_score) : nlohmann::ordered_json(nullptr);
  auto& rels = j["relations"] = nlohmann::ordered_json::array();
  for (const auto& r : sketch.relations) {
    nlohmann::ordered_json nodes = nlohmann::ordered_json::array();
    for (const auto& c : r.items) {
      if (min_score && c.logdice < *min_score) continue;
      nodes.push_back({{"lemma", c.collocate},
                       {"logdice", round_display(c.logdice)},
                       {"f_pair", c.f_pair},
                       {"size", round_display(std::max(c.logdice, 0.0) / 14.0, 4)}});
    }
    rels.push_back({{"relation", to_string(r.relation)}, {"nodes", std::move(nodes)}});
  }
  return j;
}

}  // namespace lexis
