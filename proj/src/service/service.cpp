#include "lexis/service.hpp"

#include <charconv>
#include <functional>
#include <limits>
#include <map>

#include <fmt/format.h>
#include <httplib.h>

#include "lexis/colloc.hpp"
#include "lexis/concord.hpp"
#include "lexis/error.hpp"

namespace lexis {
namespace {

using ojson = nlohmann::ordered_json;

// Request-level failure that is not a library error.
struct HttpError {
  int status;
  std::string code;
  std::string message;
};

Response json_error(int status, std::string_view code, std::string_view message) {
  ojson j;
  j["error"] = {{"code", code}, {"message", message}};
  return {status, j.dump()};
}

class Query {
 public:
  explicit Query(const QueryParams& p) : p_(p) {}

  std::optional<std::string> get(const std::string& key) const {
    const auto it = p_.find(key);
    if (it == p_.end()) return std::nullopt;
    return it->second;
  }

  std::string required(const std::string& key) const {
    auto v = get(key);
    if (!v || v->empty()) throw HttpError{400, "BadRequest", fmt::format("missing parameter '{}'", key)};
    return *v;
  }

  std::string value_or(const std::string& key, std::string fallback) const {
    auto v = get(key);
    return v && !v->empty() ? *v : fallback;
  }

  std::size_t size(const std::string& key, std::size_t fallback, std::size_t lo, std::size_t hi) const {
    const auto v = get(key);
    if (!v || v->empty()) return fallback;
    std::size_t n = 0;
    const auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), n);
    if (ec != std::errc() || ptr != v->data() + v->size() || n < lo || n > hi) {
      throw HttpError{400, "BadRequest",
                      fmt::format("parameter '{}' must be an integer in [{}, {}]", key, lo, hi)};
    }
    return n;
  }

  std::optional<double> number(const std::string& key) const {
    const auto v = get(key);
    if (!v || v->empty()) return std::nullopt;
    double x = 0.0;
    const auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), x);
    if (ec != std::errc() || ptr != v->data() + v->size()) {
      throw HttpError{400, "BadRequest", fmt::format("parameter '{}' must be a number", key)};
    }
    return x;
  }

 private:
  const QueryParams& p_;
};

std::vector<std::string> split_commas(std::string_view s) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const auto next = s.find(',', pos);
    const auto part = s.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos);
    if (!part.empty()) out.emplace_back(part);
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return out;
}

Corpus view_of(const ServiceState& s, const Query& q, const std::string& key = "filter") {
  const auto f = q.get(key);
  if (!f || f->empty()) return s.corpus;
  return s.corpus.subcorpus(SubcorpusFilter::parse(*f));
}

const TopicModel& model_of(const ServiceState& s) {
  if (!s.model) throw Error(Errc::MissingModel, "the service was started without a topic model");
  return *s.model;
}

void require_known_lemma(const ServiceState& s, const std::string& lemma) {
  if (!s.corpus.lemma_id(lemma)) {
    throw HttpError{404, "NotFound", fmt::format("lemma '{}' does not occur in the corpus", lemma)};
  }
}

std::vector<RelationKind> relations_of(const Query& q) {
  const auto v = q.get("relation");
  if (!v || v->empty()) return default_sketch_relations();
  std::vector<RelationKind> out;
  for (const auto& name : split_commas(*v)) {
    const auto r = parse_relation(name);
    if (!r) throw HttpError{400, "BadRequest", fmt::format("unknown relation '{}'", name)};
    out.push_back(*r);
  }
  return out;
}

ojson level_stats(const Corpus& c, bool by_phase) {
  std::map<int, std::pair<std::size_t, std::size_t>> stats;
  for (const auto& d : c.documents()) {
    auto& [docs, tokens] = stats[by_phase ? d->id().phase : d->id().week];
    ++docs;
    tokens += d->size();
  }
  ojson out = ojson::array();
  for (const auto& [level, st] : stats) {
    out.push_back({{by_phase ? "phase" : "week", level}, {"documents", st.first}, {"tokens", st.second}});
  }
  return out;
}

ojson meta(const ServiceState& s, const Query&) {
  ojson j;
  j["documents"] = s.corpus.size();
  j["tokens"] = s.corpus.token_count();
  j["vocabulary"] = s.corpus.vocabulary().size();
  j["tagged"] = s.corpus.tagged();
  j["pos_tagged"] = s.corpus.pos_tagged();
  j["phases"] = level_stats(s.corpus, true);
  j["weeks"] = level_stats(s.corpus, false);
  if (s.model) {
    j["model"] = {{"k", s.model->k()}, {"documents", s.model->documents.size()}};
  } else {
    j["model"] = nullptr;
  }
  ojson domains = ojson::array();
  for (const auto& d : s.lexicons.domains()) domains.push_back(d.domain);
  j["lexicon_domains"] = std::move(domains);
  j["metaphor_targets"] = s.metaphor_targets;
  return j;
}

ojson kwic_endpoint(const ServiceState& s, const Query& q) {
  const auto query = KwicQuery::parse(q.required("q"));
  const auto sort_name = q.value_or("sort", "position");
  const auto sort = parse_kwic_sort(sort_name);
  if (!sort) throw HttpError{400, "BadRequest", fmt::format("unknown sort '{}'", sort_name)};
  const auto width = q.size("width", 8, 0, 50);
  const auto page = q.size("page", 1, 1, std::numeric_limits<std::size_t>::max());
  const auto page_size = q.size("page_size", 50, 1, kMaxPageSize);
  return to_json(kwic(view_of(s, q), query, width, *sort, page, page_size));
}

ojson freq_endpoint(const ServiceState& s, const Query& q) {
  return to_json(freq(view_of(s, q), q.required("lemma")));
}

ojson sketch_endpoint(const ServiceState& s, const Query& q) {
  const auto lemma = q.required("lemma");
  require_known_lemma(s, lemma);
  const auto rels = relations_of(q);
  const auto max = q.size("max_per_rel", 10, 1, kMaxPerRelation);
  return to_json(word_sketch(view_of(s, q), lemma, max, q.number("min_score"), rels));
}

ojson sketchdiff_endpoint(const ServiceState& s, const Query& q) {
  const auto lemma = q.required("lemma");
  require_known_lemma(s, lemma);
  const auto rels = relations_of(q);
  const auto diff = sketch_diff(view_of(s, q, "a"), view_of(s, q, "b"), lemma, rels);
  return {{"lemma", lemma},
          {"a", q.value_or("a", "")},
          {"b", q.value_or("b", "")},
          {"rows", to_json(std::span<const SketchDiff>(diff))}};
}

ojson pattern_endpoint(const ServiceState& s, const Query& q) {
  ojson rows = ojson::array();
  for (const auto& [lemma, count] : copular_pattern(view_of(s, q), q.required("y"))) {
    rows.push_back({{"lemma", lemma}, {"count", count}});
  }
  return {{"y", q.required("y")}, {"rows", std::move(rows)}};
}

ojson topics_endpoint(const ServiceState& s, const Query& q) {
  const auto& m = model_of(s);
  const auto name = q.value_or("weighting", "probability");
  const auto w = parse_weighting(name);
  if (!w) throw HttpError{400, "BadRequest", fmt::format("unknown weighting '{}'", name)};
  return topics_summary(m, q.size("n", 10, 1, 1000), *w);
}

Covariate covariate_of(const Query& q, const std::string& key) {
  const auto name = q.value_or(key, "phase");
  const auto c = parse_covariate(name);
  if (!c) throw HttpError{400, "BadRequest", fmt::format("unknown covariate '{}'", name)};
  return *c;
}

ojson effects_endpoint(const ServiceState& s, const Query& q) {
  const auto& m = model_of(s);
  const auto cov = covariate_of(q, "covariate");
  return {{"covariate", to_string(cov)}, {"effects", to_json(estimate_effect(m, view_of(s, q), cov))}};
}

ojson prevalence_endpoint(const ServiceState& s, const Query& q) {
  const auto& m = model_of(s);
  const auto by = covariate_of(q, "by");
  return to_json(prevalence_by(m, view_of(s, q), by), m, by);
}

ojson metaphors_endpoint(const ServiceState& s, const Query& q) {
  std::set<std::string> targets = s.metaphor_targets;
  if (const auto t = q.get("target"); t && !t->empty()) {
    const auto parts = split_commas(*t);
    targets = std::set<std::string>(parts.begin(), parts.end());
  }
  const auto scope = Scope::parse(q.value_or("scope", "sentence"));
  const auto cands = flag_candidates(view_of(s, q), targets, s.lexicons, scope);
  ojson j;
  j["targets"] = targets;
  j["scope"] = scope.str();
  j["candidates"] = to_json(std::span<const MetaphorCandidate>(cands));
  if (s.model) {
    j["matrix"] = to_json(topic_domain_matrix(cands, *s.model, &s.lexicons));
  } else {
    j["matrix"] = nullptr;
  }
  return j;
}

using Endpoint = std::function<ojson(const ServiceState&, const Query&)>;

const std::map<std::string, Endpoint, std::less<>>& endpoints() {
  static const std::map<std::string, Endpoint, std::less<>> table = {
      {"/health", [](const ServiceState&, const Query&) { return ojson{{"status", "ok"}}; }},
      {"/meta", meta},
      {"/kwic", kwic_endpoint},
      {"/freq", freq_endpoint},
      {"/sketch", sketch_endpoint},
      {"/sketchdiff", sketchdiff_endpoint},
      {"/pattern", pattern_endpoint},
      {"/topics", topics_endpoint},
      {"/effects", effects_endpoint},
      {"/prevalence", prevalence_endpoint},
      {"/metaphors", metaphors_endpoint},
  };
  return table;
}

}  // namespace

int http_status(Errc code) noexcept {
  switch (code) {
    case Errc::InvalidFilter:
    case Errc::InvalidPattern:
    case Errc::InvalidConfig:
    case Errc::MalformedId:
    case Errc::InvalidPhase:
    case Errc::InvalidCounts:
      return 400;
    case Errc::TopicOutOfRange:
    case Errc::MissingModel:
      return 404;
    default:
      return 422;
  }
}

Response handle(const ServiceState& state, std::string_view path, const QueryParams& params) {
  const auto& table = endpoints();
  const auto it = table.find(path);
  if (it == table.end()) return json_error(404, "NotFound", fmt::format("no endpoint {}", path));
  try {
    return {200, it->second(state, Query(params)).dump()};
  } catch (const HttpError& e) {
    return json_error(e.status, e.code, e.message);
  } catch (const Error& e) {
    return json_error(http_status(e.code()), to_string(e.code()), e.what());
  } catch (const std::exception& e) {
    return json_error(500, "Internal", e.what());
  }
}

struct Server::Impl {
  const ServiceState& state;
  httplib::Server http;

  explicit Impl(const ServiceState& s) : state(s) {
    http.set_default_headers({{"Access-Control-Allow-Origin", state.cors_origin},
                              {"Access-Control-Allow-Methods", "GET, OPTIONS"},
                              {"Access-Control-Allow-Headers", "Content-Type"}});
    http.Get(".*", [this](const httplib::Request& req, httplib::Response& res) {
      const QueryParams params(req.params.begin(), req.params.end());
      auto r = handle(state, req.path, params);
      res.status = r.status;
      res.set_content(std::move(r.body), "application/json; charset=utf-8");
    });
    http.Options(".*", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
  }
};

Server::Server(const ServiceState& state) : impl_(std::make_unique<Impl>(state)) {}
Server::~Server() { stop(); }

int Server::bind(const std::string& host, int port) {
  const int bound = port == 0 ? impl_->http.bind_to_any_port(host) : (impl_->http.bind_to_port(host, port) ? port : -1);
  if (bound <= 0) throw Error(Errc::IoError, fmt::format("cannot bind {}:{}", host, port));
  return bound;
}

void Server::listen() { impl_->http.listen_after_bind(); }

void Server::stop() {
  if (impl_) impl_->http.stop();
}

}  // namespace lexis
