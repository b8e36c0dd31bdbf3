#pragma once

// Hand-built and randomly generated corpora shared by unit and acceptance
// tests, plus brute-force oracles that never touch the library's indexes.

#include <algorithm>
#include <cstdlib>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "lexis/corpus.hpp"
#include "lexis/text.hpp"

namespace lexis::testing {

// One annotated token for building sentences by hand.
struct T {
  std::string lemma;
  Upos pos = Upos::NOUN;
  int head = -1;  // -1: no head; 0: root; otherwise sentence-local id
  std::string deprel;
  std::string surface;  // defaults to the lemma
};

// Builds a document from sentences of annotated tokens; ids are 1-based
// positions inside each sentence.
inline Document make_doc(const std::string& id, const std::vector<std::vector<T>>& sentences) {
  std::vector<Token> tokens;
  int offset = 0;
  for (std::size_t s = 0; s < sentences.size(); ++s) {
    for (std::size_t i = 0; i < sentences[s].size(); ++i) {
      const T& in = sentences[s][i];
      Token t;
      t.surface = in.surface.empty() ? in.lemma : in.surface;
      t.lemma = in.lemma;
      t.pos = in.pos;
      t.id = static_cast<int>(i) + 1;
      if (in.head >= 0) t.head = in.head;
      t.deprel = in.deprel;
      t.sent = static_cast<int>(s);
      t.offset = offset++;
      tokens.push_back(std::move(t));
    }
  }
  return Document(parse_document_id(id), std::move(tokens));
}

// Untagged document from whitespace-separated sentences.
inline Document plain_doc(const std::string& id, const std::vector<std::string>& sentences) {
  std::vector<std::vector<T>> out;
  for (const auto& s : sentences) {
    std::vector<T> sent;
    std::size_t pos = 0;
    while (pos < s.size()) {
      const auto next = s.find(' ', pos);
      const auto word = s.substr(pos, next - pos);
      if (!word.empty()) sent.push_back({text::to_lower(word), Upos::UNKNOWN, -1, "", word});
      if (next == std::string::npos) break;
      pos = next + 1;
    }
    out.push_back(std::move(sent));
  }
  return make_doc(id, out);
}

inline std::string nth_id(int n, int phase = 1, int week = 1) {
  // Unique id per n: day and letter vary.
  const int day = 1 + n % 28;
  const char seq = static_cast<char>('a' + (n / 28) % 26);
  const int month_offset = n / (28 * 26);
  static const char* months[] = {"january", "february", "march", "april", "may", "june",
                                 "july", "august", "september", "october", "november", "december"};
  return "phase" + std::to_string(phase) + "_week" + std::to_string(week) + "_" +
         months[month_offset % 12] + "_" + std::to_string(day) + std::string(1, seq);
}

inline Document sized_doc(const std::string& id, std::size_t tokens, std::size_t hits,
                          const std::string& lemma) {
  std::vector<Token> toks;
  toks.reserve(tokens);
  for (std::size_t i = 0; i < tokens; ++i) {
    Token t;
    t.surface = t.lemma = i < hits ? lemma : "parola";
    t.id = static_cast<int>(i % 1000) + 1;
    t.sent = static_cast<int>(i / 1000);
    t.offset = static_cast<int>(i);
    toks.push_back(std::move(t));
  }
  return Document(parse_document_id(id), std::move(toks));
}

// `tokens` untagged filler tokens around `hits` occurrences of `lemma`.
inline Corpus sized_corpus(std::size_t tokens, std::size_t hits, const std::string& lemma) {
  std::vector<Document> docs;
  docs.push_back(sized_doc("phase1_week1_march_01", tokens, hits, lemma));
  return Corpus::from_documents(std::move(docs));
}

// Phase 1: 232,532 tokens with 81 tsunami; phase 2: 190,219 tokens with 83.
inline Corpus pmw_fixture() {
  std::vector<Document> docs;
  docs.push_back(sized_doc("phase1_week1_march_01", 232532, 81, "tsunami"));
  docs.push_back(sized_doc("phase2_week9_may_04", 190219, 83, "tsunami"));
  return Corpus::from_documents(std::move(docs));
}

// Random dependency-annotated corpus with a small vocabulary so that pairs
// repeat. Heads are random valid ids within the sentence.
inline Corpus random_tagged_corpus(unsigned seed, int docs, int max_sentence = 12) {
  std::mt19937 rng(seed);
  const std::vector<std::string> lemmas = {"economia", "crisi", "società", "virus", "motore",
                                           "italiano", "globale", "subire", "ripartire", "il",
                                           ",", "tsunami", "malato", "generare"};
  const std::vector<Upos> tags = {Upos::NOUN, Upos::VERB, Upos::ADJ, Upos::DET, Upos::PUNCT};
  const std::vector<std::string> rels = {"amod", "nsubj", "obj", "det", "nmod", "nsubj:pass",
                                         "dobj", "amod:x", "punct", "obl"};
  std::vector<Document> out;
  for (int d = 0; d < docs; ++d) {
    std::vector<std::vector<T>> sentences;
    const int n_sent = 1 + static_cast<int>(rng() % 6);
    for (int s = 0; s < n_sent; ++s) {
      const int len = 2 + static_cast<int>(rng() % static_cast<unsigned>(max_sentence - 1));
      std::vector<T> sent;
      for (int i = 0; i < len; ++i) {
        T t;
        t.lemma = lemmas[rng() % lemmas.size()];
        t.pos = tags[rng() % tags.size()];
        if (rng() % 8 == 0) {
          t.head = 0;
          t.deprel = "root";
        } else {
          int h = 1 + static_cast<int>(rng() % static_cast<unsigned>(len));
          if (h == i + 1) h = (h % len) + 1;
          t.head = h == i + 1 ? 0 : h;
          t.deprel = rels[rng() % rels.size()];
        }
        sent.push_back(t);
      }
      sentences.push_back(std::move(sent));
    }
    out.push_back(make_doc(nth_id(d, 1 + d % 2, 1 + d % 14), sentences));
  }
  return Corpus::from_documents(std::move(out));
}

struct OraclePair {
  std::size_t f_head = 0;
  std::size_t f_coll = 0;
  std::size_t f_pair = 0;
};

// Counts lemma frequencies by a plain scan.
inline std::map<std::string, std::size_t> scan_frequencies(const Corpus& c) {
  std::map<std::string, std::size_t> f;
  for (const auto& d : c.documents()) {
    for (const auto& t : d->tokens()) ++f[t.lemma];
  }
  return f;
}

// Groups a document's tokens by their `sent` field.
inline std::vector<std::vector<Token>> scan_sentences(const Document& d) {
  std::map<int, std::vector<Token>> by;
  for (const auto& t : d.tokens()) by[t.sent].push_back(t);
  std::vector<std::vector<Token>> out;
  for (auto& [k, v] : by) out.push_back(std::move(v));
  return out;
}

// O(n^2) sentence-bounded window scan.
inline std::map<std::string, OraclePair> brute_window(const Corpus& c, const std::string& head,
                                                      int span,
                                                      const std::set<std::string>& stoplist) {
  const auto freq = scan_frequencies(c);
  std::map<std::string, std::pair<std::set<std::pair<int, int>>, std::set<std::pair<int, int>>>> tally;
  for (std::size_t d = 0; d < c.size(); ++d) {
    for (const auto& sent : scan_sentences(c.doc(d))) {
      for (const auto& x : sent) {
        for (const auto& y : sent) {
          if (x.offset == y.offset || x.lemma != head || y.lemma == head) continue;
          if (std::abs(x.offset - y.offset) > span) continue;
          if (y.pos == Upos::PUNCT || y.pos == Upos::SYM || text::is_punctuation(y.surface)) continue;
          if (x.pos == Upos::PUNCT || x.pos == Upos::SYM || text::is_punctuation(x.surface)) continue;
          if (stoplist.contains(y.lemma)) continue;
          auto& [hs, cs] = tally[y.lemma];
          hs.insert({static_cast<int>(d), x.offset});
          cs.insert({static_cast<int>(d), y.offset});
        }
      }
    }
  }
  std::map<std::string, OraclePair> out;
  for (const auto& [lemma, sets] : tally) {
    out[lemma] = {freq.at(head), freq.at(lemma), std::min(sets.first.size(), sets.second.size())};
  }
  return out;
}

// Scan over (governor, child, deprel) triples.
inline std::map<std::string, OraclePair> brute_dependency(const Corpus& c, const std::string& head,
                                                          const std::string& relation) {
  const auto freq = scan_frequencies(c);
  std::map<std::string, std::pair<std::set<std::pair<int, int>>, std::set<std::pair<int, int>>>> tally;
  for (std::size_t d = 0; d < c.size(); ++d) {
    for (const auto& sent : scan_sentences(c.doc(d))) {
      for (const auto& child : sent) {
        if (!child.head || *child.head == 0) continue;
        const Token* gov = nullptr;
        for (const auto& t : sent) {
          if (t.id == *child.head) gov = &t;
        }
        if (!gov) continue;
        const std::string base = child.deprel.substr(0, child.deprel.find(':'));
        const Token* h = nullptr;
        const Token* coll = nullptr;
        if (relation == "modifier" && base == "amod" && gov->lemma == head) {
          h = gov;
          coll = &child;
        } else if (relation == "subject-of" && base == "nsubj" && child.deprel != "nsubj:pass" &&
                   child.lemma == head && gov->pos == Upos::VERB) {
          h = &child;
          coll = gov;
        } else if (relation == "object-of" && (base == "obj" || base == "dobj") &&
                   child.lemma == head && gov->pos == Upos::VERB) {
          h = &child;
          coll = gov;
        }
        if (!h) continue;
        auto& [hs, cs] = tally[coll->lemma];
        hs.insert({static_cast<int>(d), h->offset});
        cs.insert({static_cast<int>(d), coll->offset});
      }
    }
  }
  std::map<std::string, OraclePair> out;
  for (const auto& [lemma, sets] : tally) {
    out[lemma] = {freq.at(head), freq.at(lemma), std::min(sets.first.size(), sets.second.size())};
  }
  return out;
}

}  // namespace lexis::testing
