#include "lexis/concord.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <ostream>

#include <fmt/format.h>

#include "lexis/error.hpp"
#include "lexis/text.hpp"

namespace lexis {
namespace {

[[noreturn]] void bad_pattern(std::string_view source, std::size_t pos, std::string_view what) {
  throw Error(Errc::InvalidPattern,
              fmt::format("pattern '{}': {} at position {}", source, what, pos));
}

std::vector<std::string> split_alternatives(std::string_view v) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    const auto bar = v.find('|', pos);
    out.emplace_back(v.substr(pos, bar - pos));
    if (bar == std::string_view::npos) break;
    pos = bar + 1;
  }
  return out;
}

bool contains(const std::vector<std::string>& values, const std::string& s) {
  return std::find(values.begin(), values.end(), s) != values.end();
}

std::string join(const std::vector<std::string>& words) {
  std::string out;
  for (const auto& w : words) {
    if (!out.empty()) out.push_back(' ');
    for (char c : w) out.push_back(c == '\t' || c == '\n' || c == '\r' ? ' ' : c);
  }
  return out;
}

struct Hit {
  std::uint32_t doc;
  std::size_t begin;  // token index in document
  std::size_t end;
};

std::vector<Hit> find_hits(const Corpus& view, const KwicQuery& q) {
  std::vector<Hit> hits;
  switch (q.kind()) {
    case KwicQuery::Kind::Lemma:
      for (const auto& ref : view.occurrences(q.value())) {
        hits.push_back({ref.doc, ref.token, ref.token + 1});
      }
      break;
    case KwicQuery::Kind::Surface: {
      const std::string want = text::to_lower(q.value());
      for (std::uint32_t d = 0; d < view.size(); ++d) {
        const auto tokens = view.doc(d).tokens();
        for (std::size_t i = 0; i < tokens.size(); ++i) {
          if (text::to_lower(tokens[i].surface) == want) hits.push_back({d, i, i + 1});
        }
      }
      break;
    }
    case KwicQuery::Kind::Pattern: {
      const auto& pattern = *q.token_pattern();
      for (std::uint32_t d = 0; d < view.size(); ++d) {
        const auto& doc = view.doc(d);
        const auto tokens = doc.tokens();
        for (const auto& span : doc.sentences()) {
          const auto sentence = tokens.subspan(span.begin, span.end - span.begin);
          std::size_t i = 0;
          while (i < sentence.size()) {
            const auto len = pattern.match_at(sentence, i);
            if (len && *len > 0) {
              hits.push_back({d, span.begin + i, span.begin + i + *len});
              i += *len;
            } else {
              ++i;
            }
          }
        }
      }
      break;
    }
  }
  return hits;
}

ConcordanceLine make_line(const Corpus& view, const Hit& h, std::size_t width) {
  const auto& doc = view.doc(h.doc);
  const auto tokens = doc.tokens();
  ConcordanceLine line;
  line.doc = doc.id();
  line.sent = tokens[h.begin].sent;
  line.offset = tokens[h.begin].offset;
  line.context_width = width;
  const std::size_t lo = h.begin >= width ? h.begin - width : 0;
  const std::size_t hi = std::min(tokens.size(), h.end + width);
  for (std::size_t i = lo; i < h.begin; ++i) line.left.push_back(tokens[i].surface);
  for (std::size_t i = h.begin; i < h.end; ++i) line.node.push_back(tokens[i].surface);
  for (std::size_t i = h.end; i < hi; ++i) line.right.push_back(tokens[i].surface);
  return line;
}

std::vector<std::string> lowered(const std::vector<std::string>& words, bool reverse) {
  std::vector<std::string> out;
  out.reserve(words.size());
  for (const auto& w : words) out.push_back(text::to_lower(w));
  if (reverse) std::reverse(out.begin(), out.end());
  return out;
}

}  // namespace

bool PatternSlot::accepts(const Token& t) const {
  if (!lemmas.empty() && !contains(lemmas, t.lemma)) return false;
  if (!pos.empty() && std::find(pos.begin(), pos.end(), t.pos) == pos.end()) return false;
  if (!words.empty() && !contains(words, text::to_lower(t.surface))) return false;
  return true;
}

TokenPattern::TokenPattern(std::vector<PatternSlot> slots) : slots_(std::move(slots)) {
  if (slots_.empty()) throw Error(Errc::InvalidPattern, "pattern has no slots");
  if (std::all_of(slots_.begin(), slots_.end(), [](const PatternSlot& s) { return s.optional; })) {
    throw Error(Errc::InvalidPattern, "pattern needs at least one required slot");
  }
}

TokenPattern TokenPattern::parse(std::string_view src) {
  std::vector<PatternSlot> slots;
  std::size_t i = 0;
  auto skip_ws = [&] {
    while (i < src.size() && (src[i] == ' ' || src[i] == '\t' || src[i] == '\n')) ++i;
  };
  skip_ws();
  if (i == src.size()) bad_pattern(src, i, "empty pattern");
  while (i < src.size()) {
    if (src[i] != '[') bad_pattern(src, i, "expected '['");
    ++i;
    PatternSlot slot;
    while (true) {
      skip_ws();
      if (i >= src.size()) bad_pattern(src, i, "unterminated slot");
      if (src[i] == ']') {
        ++i;
        break;
      }
      const std::size_t key_start = i;
      while (i < src.size() && std::isalpha(static_cast<unsigned char>(src[i]))) ++i;
      const std::string_view key = src.substr(key_start, i - key_start);
      skip_ws();
      if (i >= src.size() || src[i] != '=') bad_pattern(src, i, "expected '='");
      ++i;
      skip_ws();
      if (i >= src.size() || src[i] != '"') bad_pattern(src, i, "expected '\"'");
      const std::size_t value_start = ++i;
      while (i < src.size() && src[i] != '"') ++i;
      if (i >= src.size()) bad_pattern(src, value_start, "unterminated value");
      const std::string_view value = src.substr(value_start, i - value_start);
      ++i;
      auto alts = split_alternatives(value);
      if (std::any_of(alts.begin(), alts.end(), [](const std::string& a) { return a.empty(); })) {
        bad_pattern(src, value_start, "empty alternative");
      }
      if (key == "lemma") {
        slot.lemmas = std::move(alts);
      } else if (key == "word") {
        for (auto& a : alts) slot.words.push_back(text::to_lower(a));
      } else if (key == "pos") {
        for (const auto& a : alts) {
          const Upos p = parse_upos(a);
          if (p == Upos::UNKNOWN) bad_pattern(src, value_start, fmt::format("unknown POS '{}'", a));
          slot.pos.push_back(p);
        }
      } else {
        bad_pattern(src, key_start, fmt::format("unknown attribute '{}'", key));
      }
    }
    if (i < src.size() && src[i] == '?') {
      slot.optional = true;
      ++i;
    }
    slots.push_back(std::move(slot));
    skip_ws();
  }
  return TokenPattern(std::move(slots));
}

std::optional<std::size_t> TokenPattern::match_at(std::span<const Token> sentence,
                                                  std::size_t start) const {
  // Backtracking over optional slots; patterns are short.
  std::optional<std::size_t> best;
  auto go = [&](auto&& self, std::size_t slot, std::size_t pos) -> void {
    if (slot == slots_.size()) {
      const std::size_t len = pos - start;
      if (!best || len > *best) best = len;
      return;
    }
    const auto& s = slots_[slot];
    if (pos < sentence.size() && s.accepts(sentence[pos])) self(self, slot + 1, pos + 1);
    if (s.optional) self(self, slot + 1, pos);
  };
  go(go, 0, start);
  return best;
}

KwicQuery KwicQuery::lemma(std::string value) {
  KwicQuery q;
  q.kind_ = Kind::Lemma;
  q.value_ = std::move(value);
  return q;
}

KwicQuery KwicQuery::surface(std::string value) {
  KwicQuery q;
  q.kind_ = Kind::Surface;
  q.value_ = std::move(value);
  return q;
}

KwicQuery KwicQuery::pattern(TokenPattern p) {
  KwicQuery q;
  q.kind_ = Kind::Pattern;
  q.pattern_ = std::move(p);
  return q;
}

KwicQuery KwicQuery::parse(std::string_view q) {
  std::size_t i = 0;
  while (i < q.size() && q[i] == ' ') ++i;
  if (i < q.size() && q[i] == '[') {
    auto out = pattern(TokenPattern::parse(q));
    out.value_ = std::string(q);
    return out;
  }
  if (q.empty()) throw Error(Errc::InvalidPattern, "empty query");
  return lemma(std::string(q));
}

std::optional<KwicSort> parse_kwic_sort(std::string_view name) noexcept {
  if (name == "position") return KwicSort::Position;
  if (name == "left") return KwicSort::Left;
  if (name == "right") return KwicSort::Right;
  return std::nullopt;
}

std::vector<ConcordanceLine> kwic_all(const Corpus& view, const KwicQuery& query,
                                      std::size_t context_width, KwicSort sort) {
  const auto hits = find_hits(view, query);
  std::vector<ConcordanceLine> lines;
  lines.reserve(hits.size());
  for (const auto& h : hits) lines.push_back(make_line(view, h, context_width));
  // Hits come out in document order already, so a stable sort keeps position
  // as the tie-break.
  if (sort != KwicSort::Position) {
    std::vector<std::vector<std::string>> keys;
    keys.reserve(lines.size());
    for (const auto& l : lines) {
      keys.push_back(sort == KwicSort::Left ? lowered(l.left, true) : lowered(l.right, false));
    }
    std::vector<std::size_t> order(lines.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });
    std::vector<ConcordanceLine> sorted;
    sorted.reserve(lines.size());
    for (auto i : order) sorted.push_back(std::move(lines[i]));
    lines = std::move(sorted);
  }
  return lines;
}

KwicPage kwic(const Corpus& view, const KwicQuery& query, std::size_t context_width,
              KwicSort sort, std::size_t page, std::size_t page_size) {
  if (page < 1) throw Error(Errc::InvalidConfig, "page must be at least 1");
  if (page_size < 1) throw Error(Errc::InvalidConfig, "page_size must be at least 1");
  auto all = kwic_all(view, query, context_width, sort);
  KwicPage out;
  out.total = all.size();
  out.page = page;
  out.page_size = page_size;
  const std::size_t first = (page - 1) * page_size;
  if (first < all.size()) {
    const std::size_t last = std::min(all.size(), first + page_size);
    out.lines.assign(std::make_move_iterator(all.begin() + static_cast<std::ptrdiff_t>(first)),
                     std::make_move_iterator(all.begin() + static_cast<std::ptrdiff_t>(last)));
  }
  return out;
}

std::vector<std::pair<std::string, std::size_t>> copular_pattern(const Corpus& view,
                                                                 std::string_view y,
                                                                 const CopulaOptions& options) {
  const bool tagged = view.pos_tagged();
  PatternSlot x;
  PatternSlot copula;
  PatternSlot det;
  det.optional = true;
  PatternSlot target;
  target.lemmas = {std::string(y)};
  if (tagged) {
    x.pos = {Upos::NOUN, Upos::PROPN};
    copula.lemmas.assign(options.copula_lemmas.begin(), options.copula_lemmas.end());
    det.pos = {Upos::DET};
  } else {
    copula.lemmas.assign(options.copula_forms.begin(), options.copula_forms.end());
    for (const auto& l : options.copula_lemmas) copula.lemmas.push_back(l);
    det.lemmas.assign(options.determiners.begin(), options.determiners.end());
  }
  const TokenPattern pattern({x, copula, det, target});

  auto plausible_x = [&](const Token& t) {
    if (tagged) return true;
    if (text::is_punctuation(t.surface) || text::is_numeric(t.surface)) return false;
    return !options.determiners.contains(t.lemma) && !options.copula_forms.contains(t.lemma) &&
           !options.copula_lemmas.contains(t.lemma);
  };

  std::map<std::string, std::size_t> counts;
  for (const auto& docp : view.documents()) {
    const auto tokens = docp->tokens();
    for (const auto& span : docp->sentences()) {
      const auto sentence = tokens.subspan(span.begin, span.end - span.begin);
      std::size_t i = 0;
      while (i < sentence.size()) {
        const auto len = plausible_x(sentence[i]) ? pattern.match_at(sentence, i) : std::nullopt;
        if (len) {
          ++counts[sentence[i].lemma];
          i += *len;
        } else {
          ++i;
        }
      }
    }
  }
  std::vector<std::pair<std::string, std::size_t>> out(counts.begin(), counts.end());
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  return out;
}

void write_kwic_tsv(std::ostream& out, std::span<const ConcordanceLine> lines) {
  out << "doc_id\tleft\tnode\tright\n";
  for (const auto& l : lines) {
    out << l.doc.str() << '\t' << join(l.left) << '\t' << join(l.node) << '\t' << join(l.right)
        << '\n';
  }
}

nlohmann::ordered_json to_json(const ConcordanceLine& line) {
  return {{"doc_id", line.doc.str()},     {"sent", line.sent},
          {"offset", line.offset},        {"left", join(line.left)},
          {"node", join(line.node)},      {"right", join(line.right)}};
}

nlohmann::ordered_json to_json(const KwicPage& page) {
  nlohmann::ordered_json lines = nlohmann::ordered_json::array();
  for (const auto& l : page.lines) lines.push_back(to_json(l));
  return {{"total", page.total}, {"lines", std::move(lines)}};
}

}  // namespace lexis
