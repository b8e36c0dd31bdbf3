#include "lexis/corpus.hpp"

#include <algorithm>
#include <array>
#include <charconv>

#include <fmt/format.h>

#include "lexis/error.hpp"

namespace lexis {
namespace {

constexpr std::array<std::string_view, 18> kUpos = {
    "ADJ", "ADP",  "ADV",  "AUX",   "CCONJ", "DET", "INTJ", "NOUN", "NUM",
    "PART", "PRON", "PROPN", "PUNCT", "SCONJ", "SYM", "VERB", "X",   "UNKNOWN"};

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

int parse_int(std::string_view s, std::string_view what) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw Error(Errc::InvalidFilter, fmt::format("filter: {} expects an integer, got '{}'", what, s));
  }
  return v;
}

}  // namespace

std::string_view to_string(Upos pos) noexcept { return kUpos[static_cast<std::size_t>(pos)]; }

Upos parse_upos(std::string_view tag) noexcept {
  for (std::size_t i = 0; i + 1 < kUpos.size(); ++i) {
    if (kUpos[i] == tag) return static_cast<Upos>(i);
  }
  return Upos::UNKNOWN;
}

Document::Document(DocumentId id, std::vector<Token> tokens, std::optional<std::string> source)
    : id_(std::move(id)), tokens_(std::move(tokens)), source_(std::move(source)) {
  if (tokens_.empty()) {
    throw Error(Errc::EmptyDocument, fmt::format("document {} has no tokens", id_.str()));
  }
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    if (i > 0 && tokens_[i].offset <= tokens_[i - 1].offset) {
      throw Error(Errc::ParseError,
                  fmt::format("document {}: token offsets must increase", id_.str()));
    }
    if (i == 0 || tokens_[i].sent != tokens_[i - 1].sent) {
      if (i > 0 && tokens_[i].sent < tokens_[i - 1].sent) {
        throw Error(Errc::ParseError,
                    fmt::format("document {}: sentence indexes must not decrease", id_.str()));
      }
      sentences_.push_back({i, i});
    }
    sentences_.back().end = i + 1;
  }
  for (std::size_t s = 0; s < sentences_.size(); ++s) {
    for (std::size_t i = sentences_[s].begin; i < sentences_[s].end; ++i) {
      const auto& head = tokens_[i].head;
      if (head && *head != 0 && !find_in_sentence(s, *head)) {
        throw Error(Errc::ParseError,
                    fmt::format("document {}: token {} has head {} outside its sentence",
                                id_.str(), tokens_[i].offset, *head));
      }
    }
  }
}

std::optional<std::size_t> Document::find_in_sentence(std::size_t sentence_index, int id) const {
  const auto& span = sentences_[sentence_index];
  const auto first = tokens_.begin() + static_cast<std::ptrdiff_t>(span.begin);
  const auto last = tokens_.begin() + static_cast<std::ptrdiff_t>(span.end);
  // Ids are increasing within a sentence because offsets are.
  const auto it = std::lower_bound(first, last, id,
                                   [](const Token& t, int value) { return t.id < value; });
  if (it == last || it->id != id) return std::nullopt;
  return static_cast<std::size_t>(it - tokens_.begin());
}

SubcorpusFilter SubcorpusFilter::parse(std::string_view expr) {
  SubcorpusFilter f;
  expr = trim(expr);
  while (!expr.empty()) {
    const auto comma = expr.find(',');
    const std::string_view item = trim(expr.substr(0, comma));
    expr = comma == std::string_view::npos ? std::string_view{} : expr.substr(comma + 1);
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) {
      throw Error(Errc::InvalidFilter, fmt::format("filter item '{}' is not key=value", item));
    }
    const std::string_view key = trim(item.substr(0, eq));
    const std::string_view value = trim(item.substr(eq + 1));
    if (key == "phase") {
      f.phase(parse_int(value, "phase"));
    } else if (key == "week") {
      const auto dash = value.find('-');
      if (dash == std::string_view::npos) {
        const int w = parse_int(value, "week");
        f.weeks(w, w);
      } else {
        f.weeks(parse_int(trim(value.substr(0, dash)), "week"),
                parse_int(trim(value.substr(dash + 1)), "week"));
      }
    } else if (key == "month") {
      const auto m = parse_month(value);
      if (!m) throw Error(Errc::InvalidFilter, fmt::format("filter: unknown month '{}'", value));
      f.month(*m);
    } else {
      throw Error(Errc::InvalidFilter, fmt::format("filter: unknown key '{}'", key));
    }
  }
  return f;
}

SubcorpusFilter& SubcorpusFilter::phase(int p) {
  phase_ = p;
  return *this;
}

SubcorpusFilter& SubcorpusFilter::weeks(int lo, int hi) {
  weeks_ = {lo, hi};
  return *this;
}

SubcorpusFilter& SubcorpusFilter::month(Month m) {
  month_ = m;
  return *this;
}

SubcorpusFilter SubcorpusFilter::complement() const {
  SubcorpusFilter f = *this;
  f.negated_ = !negated_;
  return f;
}

bool SubcorpusFilter::matches(const DocumentId& id) const {
  bool ok = true;
  if (phase_) ok = ok && id.phase == *phase_;
  if (weeks_) ok = ok && id.week >= weeks_->first && id.week <= weeks_->second;
  if (month_) ok = ok && id.month == *month_;
  return ok != negated_;
}

std::string SubcorpusFilter::str() const {
  std::string out;
  auto add = [&](const std::string& item) {
    if (!out.empty()) out.push_back(',');
    out += item;
  };
  if (phase_) add(fmt::format("phase={}", *phase_));
  if (weeks_) {
    add(weeks_->first == weeks_->second ? fmt::format("week={}", weeks_->first)
                                        : fmt::format("week={}-{}", weeks_->first, weeks_->second));
  }
  if (month_) add(fmt::format("month={}", month_name(*month_)));
  return negated_ ? "not(" + out + ")" : out;
}

Corpus::Corpus(std::vector<std::shared_ptr<const Document>> docs) : docs_(std::move(docs)) {
  std::map<std::string_view, std::uint32_t> seen;
  for (const auto& d : docs_) {
    token_count_ += d->size();
    for (const auto& t : d->tokens()) {
      seen.emplace(t.lemma, 0);
      tagged_ = tagged_ || !t.deprel.empty();
      pos_tagged_ = pos_tagged_ || t.pos != Upos::UNKNOWN;
    }
  }
  vocabulary_.reserve(seen.size());
  for (auto& [lemma, id] : seen) {
    id = static_cast<std::uint32_t>(vocabulary_.size());
    vocabulary_.emplace_back(lemma);
  }
  lemma_ids_.reserve(vocabulary_.size());
  for (std::uint32_t i = 0; i < vocabulary_.size(); ++i) lemma_ids_.emplace(vocabulary_[i], i);

  lemma_freq_.assign(vocabulary_.size(), 0);
  postings_.resize(vocabulary_.size());
  occurrences_.resize(vocabulary_.size());
  for (std::uint32_t d = 0; d < docs_.size(); ++d) {
    const auto tokens = docs_[d]->tokens();
    for (std::uint32_t i = 0; i < tokens.size(); ++i) {
      const std::uint32_t id = lemma_ids_.find(tokens[i].lemma)->second;
      ++lemma_freq_[id];
      occurrences_[id].push_back({d, i});
      auto& post = postings_[id];
      if (post.empty() || post.back().first != d) post.emplace_back(d, 0);
      ++post.back().second;
    }
  }
}

Corpus Corpus::from_documents(std::vector<Document> docs) {
  std::vector<std::shared_ptr<const Document>> shared;
  shared.reserve(docs.size());
  for (auto& d : docs) shared.push_back(std::make_shared<const Document>(std::move(d)));
  return Corpus(std::move(shared));
}

std::optional<std::uint32_t> Corpus::lemma_id(std::string_view lemma) const {
  const auto it = lemma_ids_.find(std::string(lemma));
  if (it == lemma_ids_.end()) return std::nullopt;
  return it->second;
}

std::size_t Corpus::lemma_frequency(std::string_view lemma) const {
  const auto id = lemma_id(lemma);
  return id ? lemma_freq_[*id] : 0;
}

std::span<const TokenRef> Corpus::occurrences(std::string_view lemma) const {
  const auto id = lemma_id(lemma);
  if (!id) return {};
  return occurrences_[*id];
}

Corpus Corpus::subcorpus(const SubcorpusFilter& filter) const {
  std::vector<std::shared_ptr<const Document>> kept;
  for (const auto& d : docs_) {
    if (filter.matches(d->id())) kept.push_back(d);
  }
  return Corpus(std::move(kept));
}

}  // namespace lexis
