#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <numeric>
#include <thread>

#include <fmt/format.h>

#include "gibbs.hpp"
#include "lexis/error.hpp"
#include "lexis/topics.hpp"

namespace lexis {
namespace detail {
namespace {

// Average ranks (ties share the mean rank), 1-based.
std::vector<double> average_ranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    const double r = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = r;
    i = j + 1;
  }
  return ranks;
}

void normalize_rows(Matrix& m) {
  for (std::size_t r = 0; r < m.rows; ++r) {
    double s = 0.0;
    for (std::size_t c = 0; c < m.cols; ++c) s += m(r, c);
    for (std::size_t c = 0; c < m.cols; ++c) m(r, c) /= s;
  }
}

}  // namespace

GibbsResult run_gibbs(const CodedCorpus& corpus, const ModelConfig& cfg) {
  const std::size_t K = static_cast<std::size_t>(cfg.k);
  const std::size_t V = corpus.v;
  const std::size_t D = corpus.docs.size();
  const double alpha = cfg.alpha_value();
  const double beta = cfg.beta;
  const double vbeta = static_cast<double>(V) * beta;
  const double kalpha = static_cast<double>(K) * alpha;

  std::mt19937_64 rng(cfg.seed);
  std::vector<std::int32_t> ndk(D * K, 0);
  std::vector<std::int32_t> nkw(K * V, 0);
  std::vector<std::int32_t> nk(K, 0);

  GibbsResult out;
  out.z.resize(D);
  for (std::size_t d = 0; d < D; ++d) {
    out.z[d].resize(corpus.docs[d].size());
    for (std::size_t i = 0; i < corpus.docs[d].size(); ++i) {
      const auto k = static_cast<std::size_t>(uniform01(rng) * static_cast<double>(K));
      out.z[d][i] = static_cast<std::uint16_t>(k);
      ++ndk[d * K + k];
      ++nkw[k * V + corpus.docs[d][i]];
      ++nk[k];
    }
  }

  Matrix theta_acc(D, K);
  Matrix phi_acc(K, V);
  std::size_t saved = 0;
  std::vector<double> cum(K);

  for (int it = 1; it <= cfg.iterations; ++it) {
    for (std::size_t d = 0; d < D; ++d) {
      const auto& words = corpus.docs[d];
      auto& zd = out.z[d];
      std::int32_t* nd = &ndk[d * K];
      for (std::size_t i = 0; i < words.size(); ++i) {
        const std::size_t w = words[i];
        std::size_t k = zd[i];
        --nd[k];
        --nkw[k * V + w];
        --nk[k];
        double total = 0.0;
        for (std::size_t t = 0; t < K; ++t) {
          total += (nd[t] + alpha) * (nkw[t * V + w] + beta) / (nk[t] + vbeta);
          cum[t] = total;
        }
        const double u = uniform01(rng) * total;
        k = 0;
        while (k + 1 < K && cum[k] <= u) ++k;
        zd[i] = static_cast<std::uint16_t>(k);
        ++nd[k];
        ++nkw[k * V + w];
        ++nk[k];
      }
    }
    if (it <= cfg.burnin) continue;
    ++saved;
    for (std::size_t d = 0; d < D; ++d) {
      const double denom = static_cast<double>(corpus.docs[d].size()) + kalpha;
      for (std::size_t t = 0; t < K; ++t) theta_acc(d, t) += (ndk[d * K + t] + alpha) / denom;
    }
    for (std::size_t t = 0; t < K; ++t) {
      const double denom = nk[t] + vbeta;
      for (std::size_t w = 0; w < V; ++w) phi_acc(t, w) += (nkw[t * V + w] + beta) / denom;
    }
    if (cfg.thin > 0 && (it - cfg.burnin) % cfg.thin == 0) {
      Matrix snap(D, K);
      for (std::size_t d = 0; d < D; ++d) {
        const double denom = static_cast<double>(corpus.docs[d].size()) + kalpha;
        for (std::size_t t = 0; t < K; ++t) snap(d, t) = (ndk[d * K + t] + alpha) / denom;
      }
      normalize_rows(snap);
      out.draws.push_back(std::move(snap));
    }
  }
  const double n = static_cast<double>(saved);
  for (auto& x : theta_acc.data) x /= n;
  for (auto& x : phi_acc.data) x /= n;
  normalize_rows(theta_acc);
  normalize_rows(phi_acc);
  out.theta = std::move(theta_acc);
  out.phi = std::move(phi_acc);
  return out;
}

Matrix frex_scores(const Matrix& phi, double w) {
  const std::size_t K = phi.rows;
  const std::size_t V = phi.cols;
  Matrix excl(K, V);
  for (std::size_t v = 0; v < V; ++v) {
    double s = 0.0;
    for (std::size_t k = 0; k < K; ++k) s += phi(k, v);
    for (std::size_t k = 0; k < K; ++k) excl(k, v) = s > 0.0 ? phi(k, v) / s : 0.0;
  }
  Matrix out(K, V);
  const double vd = static_cast<double>(V);
  for (std::size_t k = 0; k < K; ++k) {
    const auto er = average_ranks(excl.row(k));
    const auto fr = average_ranks(phi.row(k));
    for (std::size_t v = 0; v < V; ++v) {
      out(k, v) = 1.0 / (w / (er[v] / vd) + (1.0 - w) / (fr[v] / vd));
    }
  }
  return out;
}

}  // namespace detail

using detail::CodedCorpus;

namespace {

CodedCorpus code_corpus(const Corpus& corpus) {
  CodedCorpus coded;
  coded.v = corpus.vocabulary().size();
  coded.docs.reserve(corpus.size());
  for (const auto& d : corpus.documents()) {
    std::vector<std::uint32_t> words;
    words.reserve(d->size());
    for (const auto& t : d->tokens()) words.push_back(*corpus.lemma_id(t.lemma));
    coded.docs.push_back(std::move(words));
  }
  return coded;
}

TopicModel assemble(const Corpus& corpus, const ModelConfig& cfg, detail::GibbsResult r) {
  TopicModel m;
  m.config = cfg;
  m.vocabulary.assign(corpus.vocabulary().begin(), corpus.vocabulary().end());
  m.word_frequency.reserve(m.vocabulary.size());
  for (std::uint32_t w = 0; w < m.vocabulary.size(); ++w) {
    m.word_frequency.push_back(corpus.lemma_frequency(w));
  }
  for (const auto& d : corpus.documents()) {
    m.documents.push_back(d->id());
    m.document_lengths.push_back(d->size());
  }
  m.phi = std::move(r.phi);
  m.theta = std::move(r.theta);
  m.assignments = std::move(r.z);
  m.draws = std::move(r.draws);
  return m;
}

// Vocabulary order ranked by weight, then frequency, then lemma.
std::vector<std::size_t> ranked(std::span<const double> weight,
                                std::span<const std::size_t> freq) {
  std::vector<std::size_t> idx(weight.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    if (weight[a] != weight[b]) return weight[a] > weight[b];
    return freq[a] > freq[b];
  });
  return idx;
}

}  // namespace

void ModelConfig::validate() const {
  if (k < 1) throw Error(Errc::InvalidConfig, fmt::format("K must be at least 1, got {}", k));
  if (k > 65535) throw Error(Errc::InvalidConfig, "K must be below 65536");
  if (alpha && !(*alpha > 0.0)) throw Error(Errc::InvalidConfig, "alpha must be positive");
  if (!(beta > 0.0)) throw Error(Errc::InvalidConfig, "beta must be positive");
  if (iterations < 1) throw Error(Errc::InvalidConfig, "iterations must be at least 1");
  if (burnin < 0 || burnin >= iterations) {
    throw Error(Errc::InvalidConfig,
                fmt::format("burnin must be in [0, iterations), got {}", burnin));
  }
  if (thin < 1) throw Error(Errc::InvalidConfig, "thin must be at least 1");
}

std::optional<std::size_t> TopicModel::document_index(const DocumentId& id) const {
  // Fitted documents are in corpus order, which is sorted by id after ingest;
  // fall back to a scan when they are not.
  const auto it = std::lower_bound(documents.begin(), documents.end(), id);
  if (it != documents.end() && *it == id) return static_cast<std::size_t>(it - documents.begin());
  const auto lin = std::find(documents.begin(), documents.end(), id);
  if (lin == documents.end()) return std::nullopt;
  return static_cast<std::size_t>(lin - documents.begin());
}

std::optional<std::size_t> TopicModel::word_index(std::string_view lemma) const {
  const auto it = std::lower_bound(vocabulary.begin(), vocabulary.end(), lemma);
  if (it == vocabulary.end() || *it != lemma) return std::nullopt;
  return static_cast<std::size_t>(it - vocabulary.begin());
}

std::string TopicModel::topic_name(std::size_t topic) const {
  if (topic < labels.size() && !labels[topic].empty()) return labels[topic];
  return fmt::format("topic{}", topic);
}

TopicModel TopicModel::permuted(std::span<const std::size_t> order) const {
  const std::size_t K = k();
  std::vector<bool> seen(K, false);
  if (order.size() != K) throw Error(Errc::InvalidConfig, "permutation has the wrong length");
  for (auto o : order) {
    if (o >= K || seen[o]) throw Error(Errc::InvalidConfig, "not a permutation of the topics");
    seen[o] = true;
  }
  std::vector<std::uint16_t> inverse(K);
  for (std::size_t i = 0; i < K; ++i) inverse[order[i]] = static_cast<std::uint16_t>(i);

  TopicModel m = *this;
  for (std::size_t i = 0; i < K; ++i) {
    for (std::size_t w = 0; w < v(); ++w) m.phi(i, w) = phi(order[i], w);
  }
  auto permute_cols = [&](const Matrix& src, Matrix& dst) {
    for (std::size_t d = 0; d < src.rows; ++d) {
      for (std::size_t i = 0; i < K; ++i) dst(d, i) = src(d, order[i]);
    }
  };
  permute_cols(theta, m.theta);
  for (std::size_t s = 0; s < draws.size(); ++s) permute_cols(draws[s], m.draws[s]);
  for (auto& doc : m.assignments) {
    for (auto& z : doc) z = inverse[z];
  }
  if (!labels.empty()) {
    for (std::size_t i = 0; i < K; ++i) m.labels[i] = labels[order[i]];
  }
  return m;
}

bool TopicModel::operator==(const TopicModel& o) const {
  return config.k == o.config.k && config.alpha_value() == o.config.alpha_value() && config.beta == o.config.beta &&
         config.iterations == o.config.iterations && config.burnin == o.config.burnin &&
         config.thin == o.config.thin && config.seed == o.config.seed &&
         vocabulary == o.vocabulary && word_frequency == o.word_frequency &&
         documents == o.documents && document_lengths == o.document_lengths && phi == o.phi &&
         theta == o.theta && assignments == o.assignments && draws == o.draws &&
         labels == o.labels;
}

TopicModel fit(const Corpus& corpus, const ModelConfig& cfg) {
  cfg.validate();
  if (corpus.empty() || corpus.token_count() == 0) {
    throw Error(Errc::EmptyCorpus, "cannot fit a topic model on an empty corpus");
  }
  return assemble(corpus, cfg, detail::run_gibbs(code_corpus(corpus), cfg));
}

std::optional<Weighting> parse_weighting(std::string_view name) noexcept {
  if (name == "probability" || name == "prob") return Weighting::Probability;
  if (name == "frex") return Weighting::Frex;
  return std::nullopt;
}

std::vector<WeightedWord> top_words(const TopicModel& model, std::size_t topic, std::size_t n,
                                    Weighting weighting, double frex_weight) {
  if (topic >= model.k()) {
    throw Error(Errc::TopicOutOfRange,
                fmt::format("topic {} out of range (K = {})", topic, model.k()));
  }
  std::vector<double> weight;
  if (weighting == Weighting::Probability) {
    weight.assign(model.phi.row(topic).begin(), model.phi.row(topic).end());
  } else {
    const auto frex = detail::frex_scores(model.phi, frex_weight);
    weight.assign(frex.row(topic).begin(), frex.row(topic).end());
  }
  const auto idx = ranked(weight, model.word_frequency);
  n = std::min(n, idx.size());
  std::vector<WeightedWord> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back({model.vocabulary[idx[i]], weight[idx[i]]});
  return out;
}

std::vector<double> semantic_coherence(const TopicModel& model, const Corpus& corpus,
                                       std::size_t m) {
  const std::size_t K = model.k();
  std::vector<std::vector<std::size_t>> top(K);
  std::vector<std::size_t> wanted;
  for (std::size_t k = 0; k < K; ++k) {
    const auto idx = ranked(model.phi.row(k), model.word_frequency);
    top[k].assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(std::min(m, idx.size())));
    wanted.insert(wanted.end(), top[k].begin(), top[k].end());
  }
  std::sort(wanted.begin(), wanted.end());
  wanted.erase(std::unique(wanted.begin(), wanted.end()), wanted.end());
  auto slot = [&](std::size_t w) {
    return static_cast<std::size_t>(std::lower_bound(wanted.begin(), wanted.end(), w) -
                                    wanted.begin());
  };

  // Binary document-word presence for the words that matter.
  const std::size_t W = wanted.size();
  std::vector<double> df(W, 0.0);
  std::vector<double> co(W * W, 0.0);
  std::vector<char> present(W);
  std::vector<std::size_t> hits;
  for (const auto& d : corpus.documents()) {
    std::fill(present.begin(), present.end(), 0);
    for (const auto& t : d->tokens()) {
      const auto w = model.word_index(t.lemma);
      if (!w) continue;
      const auto it = std::lower_bound(wanted.begin(), wanted.end(), *w);
      if (it != wanted.end() && *it == *w) present[static_cast<std::size_t>(it - wanted.begin())] = 1;
    }
    hits.clear();
    for (std::size_t i = 0; i < W; ++i) {
      if (present[i]) hits.push_back(i);
    }
    for (auto a : hits) {
      df[a] += 1.0;
      for (auto b : hits) co[a * W + b] += 1.0;
    }
  }

  std::vector<double> out(K, 0.0);
  for (std::size_t k = 0; k < K; ++k) {
    for (std::size_t i = 1; i < top[k].size(); ++i) {
      for (std::size_t j = 0; j < i; ++j) {
        const std::size_t a = slot(top[k][i]);
        const std::size_t b = slot(top[k][j]);
        if (df[b] == 0.0) continue;
        out[k] += std::log((co[a * W + b] + 1.0) / df[b]);
      }
    }
  }
  return out;
}

std::vector<double> exclusivity(const TopicModel& model, std::size_t m) {
  const auto frex = detail::frex_scores(model.phi, 0.7);
  std::vector<double> out(model.k(), 0.0);
  for (std::size_t k = 0; k < model.k(); ++k) {
    const auto idx = ranked(model.phi.row(k), model.word_frequency);
    for (std::size_t i = 0; i < std::min(m, idx.size()); ++i) out[k] += frex(k, idx[i]);
  }
  return out;
}

std::vector<KSearchRow> search_k(const Corpus& corpus, std::span<const int> ks,
                                 const ModelConfig& cfg, unsigned threads) {
  if (ks.empty()) throw Error(Errc::InvalidConfig, "searchK needs at least one candidate K");
  for (int k : ks) {
    ModelConfig c = cfg;
    c.k = k;
    c.validate();
  }
  if (corpus.empty() || corpus.token_count() == 0) {
    throw Error(Errc::EmptyCorpus, "cannot search K on an empty corpus");
  }

  const CodedCorpus full = code_corpus(corpus);
  const std::size_t D = full.docs.size();
  const std::size_t n_test = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(0.1 * static_cast<double>(D))));
  std::vector<std::size_t> order(D);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
  for (std::size_t i = 0; i < n_test; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(detail::uniform01(rng) * static_cast<double>(D - i));
    std::swap(order[i], order[j]);
  }
  std::vector<bool> sampled(D, false);
  for (std::size_t i = 0; i < n_test; ++i) sampled[order[i]] = true;

  CodedCorpus train;
  train.v = full.v;
  std::vector<std::pair<std::size_t, std::uint32_t>> held;
  for (std::size_t d = 0; d < D; ++d) {
    if (!sampled[d]) {
      train.docs.push_back(full.docs[d]);
      continue;
    }
    std::vector<std::uint32_t> kept;
    for (std::size_t i = 0; i < full.docs[d].size(); ++i) {
      if (i % 2 == 1) {
        held.emplace_back(d, full.docs[d][i]);
      } else {
        kept.push_back(full.docs[d][i]);
      }
    }
    train.docs.push_back(std::move(kept));
  }

  std::vector<KSearchRow> rows(ks.size());
  std::vector<std::exception_ptr> errors(ks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < ks.size(); i = next++) {
      try {
        ModelConfig c = cfg;
        c.k = ks[i];
        const TopicModel m = assemble(corpus, c, detail::run_gibbs(train, c));
        double ll = 0.0;
        for (const auto& [d, w] : held) {
          double p = 0.0;
          for (std::size_t t = 0; t < m.k(); ++t) p += m.theta(d, t) * m.phi(t, w);
          ll += std::log(p);
        }
        const auto coh = semantic_coherence(m, corpus);
        const auto exc = exclusivity(m);
        rows[i].k = ks[i];
        rows[i].held_out_loglik = held.empty() ? 0.0 : ll / static_cast<double>(held.size());
        rows[i].coherence = std::accumulate(coh.begin(), coh.end(), 0.0) / static_cast<double>(coh.size());
        rows[i].exclusivity = std::accumulate(exc.begin(), exc.end(), 0.0) / static_cast<double>(exc.size());
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  unsigned n_threads = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
  n_threads = std::min<unsigned>(n_threads, static_cast<unsigned>(ks.size()));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return rows;
}

}  // namespace lexis
