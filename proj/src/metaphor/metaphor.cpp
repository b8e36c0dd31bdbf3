#include "lexis/metaphor.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <ostream>

#include <fmt/format.h>

#include "lexis/csv.hpp"
#include "lexis/error.hpp"
#include "lexis/ingest.hpp"
#include "lexis/text.hpp"

namespace lexis {
namespace {

using ojson = nlohmann::ordered_json;

constexpr int kSnippetContext = 3;

std::string snippet(std::span<const Token> sentence, std::size_t a, std::size_t b) {
  const std::size_t lo = std::min(a, b);
  const std::size_t hi = std::max(a, b);
  const std::size_t from = lo >= kSnippetContext ? lo - kSnippetContext : 0;
  const std::size_t to = std::min(sentence.size(), hi + kSnippetContext + 1);
  std::string out;
  for (std::size_t i = from; i < to; ++i) {
    if (!out.empty()) out.push_back(' ');
    out += sentence[i].surface;
  }
  return out;
}

}  // namespace

LexiconPack::LexiconPack(std::string language, std::vector<Lexicon> domains)
    : language_(std::move(language)), domains_(std::move(domains)) {
  for (std::size_t d = 0; d < domains_.size(); ++d) {
    const auto& lex = domains_[d];
    if (lex.domain.empty()) throw Error(Errc::MalformedLexicon, "lexicon domain without a name");
    if (lex.lemmas.empty()) {
      throw Error(Errc::MalformedLexicon, fmt::format("lexicon domain {} has no entries", lex.domain));
    }
    for (std::size_t e = 0; e < d; ++e) {
      if (domains_[e].domain == lex.domain) {
        throw Error(Errc::MalformedLexicon, fmt::format("lexicon domain {} appears twice", lex.domain));
      }
    }
    for (const auto& lemma : lex.lemmas) {
      if (lemma.empty()) throw Error(Errc::MalformedLexicon, fmt::format("empty lemma in {}", lex.domain));
      const auto [it, fresh] = index_.emplace(lemma, d);
      if (!fresh) {
        throw Error(Errc::OverlappingDomains,
                    fmt::format("lemma '{}' is in both {} and {}", lemma,
                                domains_[it->second].domain, lex.domain));
      }
    }
  }
}

const Lexicon* LexiconPack::domain_of(std::string_view lemma) const {
  const auto it = index_.find(lemma);
  return it == index_.end() ? nullptr : &domains_[it->second];
}

LexiconPack default_lexicons() {
  return LexiconPack(
      "it", {
                {"NATURAL_DISASTER", {"tsunami", "crollo", "macerie"}, std::nullopt},
                {"BUILDING", {"fondamenta", "pilastri", "ricostruire", "edificare"}, std::nullopt},
                {"MACHINE",
                 {"motore", "carburante", "congegni", "riavviare", "ripartire"},
                 std::nullopt},
                {"LIVING_ORGANISM",
                 {"malato", "ferita", "cicatrici", "coma", "ibernazione", "infettare", "partorire"},
                 std::nullopt},
            });
}

LexiconPack parse_lexicons(std::string_view json) {
  ojson root;
  try {
    root = ojson::parse(json);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::MalformedLexicon, fmt::format("lexicon file: {}", e.what()));
  }
  if (!root.is_object()) throw Error(Errc::MalformedLexicon, "lexicon file must be a JSON object");
  std::string language = "it";
  std::vector<Lexicon> domains;
  auto read_lemmas = [](const std::string& domain, const ojson& arr) {
    if (!arr.is_array()) {
      throw Error(Errc::MalformedLexicon, fmt::format("domain {}: lemmas must be an array", domain));
    }
    std::set<std::string> out;
    for (const auto& v : arr) {
      if (!v.is_string()) {
        throw Error(Errc::MalformedLexicon, fmt::format("domain {}: lemmas must be strings", domain));
      }
      out.insert(text::to_lower(v.get<std::string>()));
    }
    return out;
  };
  for (const auto& [key, value] : root.items()) {
    if (key == "language" && value.is_string()) {
      language = value.get<std::string>();
      continue;
    }
    Lexicon lex;
    lex.domain = key;
    if (value.is_object()) {
      if (!value.contains("lemmas")) {
        throw Error(Errc::MalformedLexicon, fmt::format("domain {}: missing lemmas", key));
      }
      lex.lemmas = read_lemmas(key, value.at("lemmas"));
      if (value.contains("in_metanet")) {
        if (!value.at("in_metanet").is_boolean()) {
          throw Error(Errc::MalformedLexicon, fmt::format("domain {}: in_metanet must be boolean", key));
        }
        lex.in_metanet = value.at("in_metanet").get<bool>();
      }
    } else {
      lex.lemmas = read_lemmas(key, value);
    }
    domains.push_back(std::move(lex));
  }
  if (domains.empty()) throw Error(Errc::MalformedLexicon, "lexicon file defines no domains");
  return LexiconPack(std::move(language), std::move(domains));
}

LexiconPack load_lexicons(const std::filesystem::path& path) { return parse_lexicons(read_file(path)); }

ojson to_json(const LexiconPack& pack) {
  ojson out;
  out["language"] = pack.language();
  for (const auto& d : pack.domains()) {
    if (d.in_metanet) {
      out[d.domain] = {{"lemmas", d.lemmas}, {"in_metanet", *d.in_metanet}};
    } else {
      out[d.domain] = d.lemmas;
    }
  }
  return out;
}

Scope Scope::window(int n) {
  if (n < 1) throw Error(Errc::InvalidConfig, fmt::format("window scope needs n >= 1, got {}", n));
  Scope s;
  s.window_ = n;
  return s;
}

Scope Scope::parse(std::string_view s) {
  if (s == "sentence") return sentence();
  std::string_view digits;
  if (s.starts_with("window:")) {
    digits = s.substr(7);
  } else if (s.starts_with("window(") && s.ends_with(")")) {
    digits = s.substr(7, s.size() - 8);
  } else {
    throw Error(Errc::InvalidConfig, fmt::format("unknown scope '{}'", s));
  }
  int n = 0;
  const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), n);
  if (ec != std::errc() || ptr != digits.data() + digits.size()) {
    throw Error(Errc::InvalidConfig, fmt::format("unknown scope '{}'", s));
  }
  return window(n);
}

std::string Scope::str() const {
  return window_ ? fmt::format("window:{}", *window_) : std::string("sentence");
}

std::vector<MetaphorCandidate> flag_candidates(const Corpus& view,
                                               const std::set<std::string>& targets,
                                               const LexiconPack& lexicons, Scope scope) {
  std::vector<MetaphorCandidate> out;
  for (const auto& docp : view.documents()) {
    const auto tokens = docp->tokens();
    for (const auto& span : docp->sentences()) {
      const auto sentence = tokens.subspan(span.begin, span.end - span.begin);
      for (std::size_t i = 0; i < sentence.size(); ++i) {
        if (!targets.contains(sentence[i].lemma)) continue;
        for (std::size_t j = 0; j < sentence.size(); ++j) {
          if (j == i) continue;
          const Lexicon* lex = lexicons.domain_of(sentence[j].lemma);
          if (!lex) continue;
          if (!scope.is_sentence() &&
              std::abs(sentence[i].offset - sentence[j].offset) > scope.width()) {
            continue;
          }
          out.push_back({docp->id(), sentence[i].sent, sentence[i].lemma, sentence[i].offset,
                         lex->domain, sentence[j].lemma, sentence[j].offset,
                         snippet(sentence, i, j)});
        }
      }
    }
  }
  return out;
}

std::size_t TopicDomainMatrix::total() const {
  std::size_t n = 0;
  for (const auto& row : counts) {
    for (auto c : row) n += c;
  }
  return n;
}

std::size_t dominant_topic(const TopicModel& model, std::size_t document) {
  const auto row = model.theta.row(document);
  std::size_t best = 0;
  for (std::size_t k = 1; k < row.size(); ++k) {
    if (row[k] > row[best]) best = k;
  }
  return best;
}

TopicDomainMatrix topic_domain_matrix(std::span<const MetaphorCandidate> candidates,
                                      const TopicModel& model, const LexiconPack* lexicons) {
  TopicDomainMatrix m;
  const std::size_t K = model.k();
  for (std::size_t k = 0; k < K; ++k) m.topics.push_back(model.topic_name(k));
  if (lexicons) {
    for (const auto& d : lexicons->domains()) m.domains.push_back(d.domain);
  } else {
    std::set<std::string> seen;
    for (const auto& c : candidates) seen.insert(c.domain);
    m.domains.assign(seen.begin(), seen.end());
  }
  m.counts.assign(K, std::vector<std::size_t>(m.domains.size(), 0));
  m.topic_tokens.assign(K, 0);
  for (std::size_t d = 0; d < model.documents.size(); ++d) {
    m.topic_tokens[dominant_topic(model, d)] += model.document_lengths[d];
  }
  for (const auto& c : candidates) {
    const auto d = model.document_index(c.doc);
    if (!d) {
      throw Error(Errc::ModelCorpusMismatch,
                  fmt::format("document {} is not in the topic model", c.doc.str()));
    }
    const auto col = std::find(m.domains.begin(), m.domains.end(), c.domain);
    if (col == m.domains.end()) {
      throw Error(Errc::MalformedLexicon,
                  fmt::format("candidate domain {} is not in the lexicon pack", c.domain));
    }
    ++m.counts[dominant_topic(model, *d)][static_cast<std::size_t>(col - m.domains.begin())];
  }
  m.per_million.assign(K, std::vector<double>(m.domains.size(), 0.0));
  for (std::size_t k = 0; k < K; ++k) {
    if (m.topic_tokens[k] == 0) continue;
    for (std::size_t j = 0; j < m.domains.size(); ++j) {
      m.per_million[k][j] =
          static_cast<double>(m.counts[k][j]) * 1e6 / static_cast<double>(m.topic_tokens[k]);
    }
  }
  return m;
}

void write_candidates_csv(std::ostream& out, std::span<const MetaphorCandidate> candidates) {
  csv::write_row(out, {"doc", "sent", "target", "domain", "trigger"});
  for (const auto& c : candidates) {
    csv::write_row(out, {c.doc.str(), std::to_string(c.sent), c.target, c.domain, c.trigger});
  }
}

ojson to_json(std::span<const MetaphorCandidate> candidates) {
  ojson out = ojson::array();
  for (const auto& c : candidates) {
    out.push_back({{"doc", c.doc.str()},
                   {"sent", c.sent},
                   {"target", c.target},
                   {"domain", c.domain},
                   {"trigger", c.trigger},
                   {"snippet", c.snippet}});
  }
  return out;
}

ojson to_json(const TopicDomainMatrix& m) {
  ojson rows = ojson::array();
  for (std::size_t k = 0; k < m.topics.size(); ++k) {
    rows.push_back({{"topic", k},
                    {"label", m.topics[k]},
                    {"tokens", m.topic_tokens[k]},
                    {"counts", m.counts[k]},
                    {"per_million", m.per_million[k]}});
  }
  return {{"domains", m.domains}, {"total", m.total()}, {"rows", std::move(rows)}};
}

}  // namespace lexis
