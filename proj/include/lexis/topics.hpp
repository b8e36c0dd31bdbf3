#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "lexis/corpus.hpp"

namespace lexis {

// Dense row-major matrix of doubles.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}

  double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
  std::span<const double> row(std::size_t r) const { return {data.data() + r * cols, cols}; }

  bool operator==(const Matrix&) const = default;
};

struct ModelConfig {
  int k = 3;
  std::optional<double> alpha;  // defaults to 50 / k
  double beta = 0.01;
  int iterations = 2000;
  int burnin = 1000;
  int thin = 50;
  std::uint64_t seed = 1;

  double alpha_value() const { return alpha ? *alpha : 50.0 / k; }
  // Throws Error{InvalidConfig}.
  void validate() const;
  std::size_t draw_count() const {
    return thin > 0 ? static_cast<std::size_t>((iterations - burnin) / thin) : 0;
  }
};

class TopicModel {
 public:
  ModelConfig config;
  std::vector<std::string> vocabulary;       // V lemmas, lexicographic
  std::vector<std::size_t> word_frequency;   // corpus counts, parallel to vocabulary
  std::vector<DocumentId> documents;         // D
  std::vector<std::size_t> document_lengths; // tokens per document
  Matrix phi;                                // K x V
  Matrix theta;                              // D x K
  std::vector<std::vector<std::uint16_t>> assignments;  // final topic of every token
  std::vector<Matrix> draws;                 // saved D x K theta snapshots
  std::vector<std::string> labels;           // empty or K names

  std::size_t k() const noexcept { return phi.rows; }
  std::size_t v() const noexcept { return phi.cols; }
  std::optional<std::size_t> document_index(const DocumentId& id) const;
  std::optional<std::size_t> word_index(std::string_view lemma) const;
  // Topic display name: the label when set, otherwise "topic<k>".
  std::string topic_name(std::size_t topic) const;

  // New topic i is old topic order[i]. Throws Error{InvalidConfig} unless
  // `order` is a permutation of 0..K-1.
  TopicModel permuted(std::span<const std::size_t> order) const;

  bool operator==(const TopicModel&) const;
};

// Collapsed Gibbs sampling LDA over the lemmas of every document. theta and
// phi are averages of the per-sweep estimates after burnin; a theta snapshot
// is saved every `thin` sweeps after burnin.
// Throws Error{EmptyCorpus} or Error{InvalidConfig}.
TopicModel fit(const Corpus& corpus, const ModelConfig& cfg);

enum class Weighting { Probability, Frex };
std::optional<Weighting> parse_weighting(std::string_view name) noexcept;

struct WeightedWord {
  std::string lemma;
  double weight = 0.0;
};

// Top `n` lemmas of a topic (n is clamped to V). FREX is the weighted harmonic
// mean (w = frex_weight) of the within-topic ECDF ranks of exclusivity and
// probability. Ties go to higher corpus frequency, then to the lemma.
// Throws Error{TopicOutOfRange}.
std::vector<WeightedWord> top_words(const TopicModel& model, std::size_t topic, std::size_t n,
                                    Weighting weighting = Weighting::Probability,
                                    double frex_weight = 0.5);

enum class Covariate { Phase, Week };
std::optional<Covariate> parse_covariate(std::string_view name) noexcept;
std::string_view to_string(Covariate c) noexcept;

struct EffectEstimate {
  std::size_t topic = 0;
  std::string term;  // "(Intercept)", "phase2", "week8", ...
  double coefficient = 0.0;
  double stderr_ = 0.0;
  double p_value = 1.0;
};

// Regresses each topic's share on the covariate as a categorical factor
// (reference: phase 1 / week 1, or the lowest level present) for every saved
// theta draw, then pools: coefficient = mean over draws, variance = mean
// within-draw variance + (1 + 1/M) * between-draw variance, two-sided normal
// p-value. Rows are the documents of `view`, which must all be in the model.
// Throws Error{DegenerateDesign} or Error{ModelCorpusMismatch}.
std::vector<EffectEstimate> estimate_effect(const TopicModel& model, const Corpus& view,
                                            Covariate covariate);

struct KSearchRow {
  int k = 0;
  double held_out_loglik = 0.0;  // mean per held-out token
  double coherence = 0.0;        // mean over topics
  double exclusivity = 0.0;      // mean over topics
};

// Per candidate K: document-completion held-out likelihood (every second token
// of a 10% document sample is held out of the fit and scored), UMass
// coherence and FREX exclusivity of the top 10 words. Candidates may be fitted
// on `threads` threads (0 = hardware concurrency); results do not depend on it.
// Throws Error{InvalidConfig} or Error{EmptyCorpus}.
std::vector<KSearchRow> search_k(const Corpus& corpus, std::span<const int> ks,
                                 const ModelConfig& cfg, unsigned threads = 0);

// UMass coherence of the top `m` words of each topic, against document
// frequencies in `corpus`.
std::vector<double> semantic_coherence(const TopicModel& model, const Corpus& corpus,
                                       std::size_t m = 10);
// Sum of FREX (w = 0.7) over the top `m` words of each topic.
std::vector<double> exclusivity(const TopicModel& model, std::size_t m = 10);

struct PrevalenceRow {
  int level = 0;  // phase or week number
  std::size_t documents = 0;
  std::vector<double> mean;   // K, sums to 1
  std::vector<double> lower;  // 2.5% quantile over draws (empty without draws)
  std::vector<double> upper;  // 97.5%
};

// Mean theta per phase or week over the documents of `view`.
// Throws Error{ModelCorpusMismatch}.
std::vector<PrevalenceRow> prevalence_by(const TopicModel& model, const Corpus& view,
                                         Covariate grouping);

void save_model(const TopicModel& model, const std::filesystem::path& path);
// Throws Error{MissingModel} or Error{MalformedContainer}.
TopicModel load_model(const std::filesystem::path& path);
nlohmann::ordered_json model_to_json(const TopicModel& model);
TopicModel model_from_json(const nlohmann::ordered_json& j);

void write_effects_csv(std::ostream& out, std::span<const EffectEstimate> effects);

nlohmann::ordered_json to_json(std::span<const EffectEstimate> effects);
nlohmann::ordered_json to_json(std::span<const KSearchRow> rows);
nlohmann::ordered_json to_json(std::span<const PrevalenceRow> rows, const TopicModel& model,
                               Covariate grouping);
// Top words and corpus-wide proportions per topic.
nlohmann::ordered_json topics_summary(const TopicModel& model, std::size_t n = 10,
                                      Weighting weighting = Weighting::Probability);

}  // namespace lexis
