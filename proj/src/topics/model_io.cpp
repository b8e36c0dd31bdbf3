#include <fstream>
#include <ostream>

#include <fmt/format.h>

#include "lexis/error.hpp"
#include "lexis/topics.hpp"

namespace lexis {
namespace {

constexpr const char* kModelFormat = "lexis.topic-model";
constexpr int kModelVersion = 1;

using ojson = nlohmann::ordered_json;

ojson matrix_json(const Matrix& m) {
  ojson rows = ojson::array();
  for (std::size_t r = 0; r < m.rows; ++r) rows.push_back(ojson(std::vector<double>(m.row(r).begin(), m.row(r).end())));
  return rows;
}

Matrix matrix_from(const ojson& j, std::size_t rows, std::size_t cols, const char* what) {
  if (!j.is_array() || j.size() != rows) {
    throw Error(Errc::MalformedContainer, fmt::format("topic model: {} has the wrong shape", what));
  }
  Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    const auto& row = j.at(r);
    if (!row.is_array() || row.size() != cols) {
      throw Error(Errc::MalformedContainer, fmt::format("topic model: {} has the wrong shape", what));
    }
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = row.at(c).get<double>();
  }
  return m;
}

}  // namespace

ojson model_to_json(const TopicModel& model) {
  ojson cfg;
  cfg["k"] = model.config.k;
  cfg["alpha"] = model.config.alpha_value();
  cfg["beta"] = model.config.beta;
  cfg["iterations"] = model.config.iterations;
  cfg["burnin"] = model.config.burnin;
  cfg["thin"] = model.config.thin;
  cfg["seed"] = model.config.seed;

  ojson docs = ojson::array();
  for (std::size_t d = 0; d < model.documents.size(); ++d) {
    docs.push_back({{"id", model.documents[d].str()}, {"length", model.document_lengths[d]}});
  }
  ojson draws = ojson::array();
  for (const auto& d : model.draws) draws.push_back(matrix_json(d));

  ojson root;
  root["format"] = kModelFormat;
  root["version"] = kModelVersion;
  root["config"] = std::move(cfg);
  root["labels"] = model.labels;
  root["vocabulary"] = model.vocabulary;
  root["word_frequency"] = model.word_frequency;
  root["documents"] = std::move(docs);
  root["phi"] = matrix_json(model.phi);
  root["theta"] = matrix_json(model.theta);
  root["draws"] = std::move(draws);
  root["assignments"] = model.assignments;
  return root;
}

TopicModel model_from_json(const ojson& root) {
  if (!root.is_object() || root.value("format", "") != kModelFormat ||
      root.value("version", 0) != kModelVersion) {
    throw Error(Errc::MalformedContainer, "topic model: unsupported format or version");
  }
  TopicModel m;
  try {
    const auto& cfg = root.at("config");
    m.config.k = cfg.at("k").get<int>();
    m.config.alpha = cfg.at("alpha").get<double>();
    m.config.beta = cfg.at("beta").get<double>();
    m.config.iterations = cfg.at("iterations").get<int>();
    m.config.burnin = cfg.at("burnin").get<int>();
    m.config.thin = cfg.at("thin").get<int>();
    m.config.seed = cfg.at("seed").get<std::uint64_t>();
    m.config.validate();
    m.labels = root.at("labels").get<std::vector<std::string>>();
    m.vocabulary = root.at("vocabulary").get<std::vector<std::string>>();
    m.word_frequency = root.at("word_frequency").get<std::vector<std::size_t>>();
    for (const auto& d : root.at("documents")) {
      m.documents.push_back(parse_document_id(d.at("id").get<std::string>()));
      m.document_lengths.push_back(d.at("length").get<std::size_t>());
    }
    const auto K = static_cast<std::size_t>(m.config.k);
    const std::size_t V = m.vocabulary.size();
    const std::size_t D = m.documents.size();
    if (m.word_frequency.size() != V || (!m.labels.empty() && m.labels.size() != K)) {
      throw Error(Errc::MalformedContainer, "topic model: inconsistent vocabulary or labels");
    }
    m.phi = matrix_from(root.at("phi"), K, V, "phi");
    m.theta = matrix_from(root.at("theta"), D, K, "theta");
    for (const auto& d : root.at("draws")) m.draws.push_back(matrix_from(d, D, K, "draw"));
    m.assignments = root.at("assignments").get<std::vector<std::vector<std::uint16_t>>>();
    if (m.assignments.size() != D) {
      throw Error(Errc::MalformedContainer, "topic model: assignments do not match documents");
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::MalformedContainer, fmt::format("topic model: {}", e.what()));
  } catch (const Error& e) {
    if (e.code() == Errc::MalformedContainer) throw;
    throw Error(Errc::MalformedContainer, fmt::format("topic model: {}", e.what()));
  }
  return m;
}

void save_model(const TopicModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::IoError, fmt::format("cannot write {}", path.string()));
  out << model_to_json(model).dump() << '\n';
}

TopicModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::MissingModel, fmt::format("no topic model at {}", path.string()));
  ojson root;
  try {
    root = ojson::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::MalformedContainer, fmt::format("topic model: {}", e.what()));
  }
  return model_from_json(root);
}

void write_effects_csv(std::ostream& out, std::span<const EffectEstimate> effects) {
  out << "topic,term,coef,se,p\n";
  for (const auto& e : effects) {
    out << fmt::format("{},{},{:.6g},{:.6g},{:.6g}\n", e.topic, e.term, e.coefficient, e.stderr_,
                       e.p_value);
  }
}

ojson to_json(std::span<const EffectEstimate> effects) {
  ojson out = ojson::array();
  for (const auto& e : effects) {
    out.push_back({{"topic", e.topic},
                   {"term", e.term},
                   {"coef", e.coefficient},
                   {"se", e.stderr_},
                   {"p", e.p_value}});
  }
  return out;
}

ojson to_json(std::span<const KSearchRow> rows) {
  ojson out = ojson::array();
  for (const auto& r : rows) {
    out.push_back({{"k", r.k},
                   {"heldout", r.held_out_loglik},
                   {"coherence", r.coherence},
                   {"exclusivity", r.exclusivity}});
  }
  return out;
}

ojson to_json(std::span<const PrevalenceRow> rows, const TopicModel& model, Covariate grouping) {
  ojson groups = ojson::array();
  for (const auto& r : rows) {
    ojson g;
    g[std::string(to_string(grouping))] = r.level;
    g["documents"] = r.documents;
    g["mean"] = r.mean;
    if (!r.lower.empty()) {
      g["lower"] = r.lower;
      g["upper"] = r.upper;
    }
    groups.push_back(std::move(g));
  }
  ojson topics = ojson::array();
  for (std::size_t k = 0; k < model.k(); ++k) topics.push_back(model.topic_name(k));
  return {{"by", to_string(grouping)}, {"topics", std::move(topics)}, {"groups", std::move(groups)}};
}

ojson topics_summary(const TopicModel& model, std::size_t n, Weighting weighting) {
  ojson topics = ojson::array();
  for (std::size_t k = 0; k < model.k(); ++k) {
    double share = 0.0;
    for (std::size_t d = 0; d < model.theta.rows; ++d) share += model.theta(d, k);
    if (model.theta.rows > 0) share /= static_cast<double>(model.theta.rows);
    ojson words = ojson::array();
    for (const auto& w : top_words(model, k, n, weighting)) {
      words.push_back({{"lemma", w.lemma}, {"weight", w.weight}});
    }
    topics.push_back({{"topic", k},
                      {"label", model.topic_name(k)},
                      {"proportion", share},
                      {"words", std::move(words)}});
  }
  return {{"k", model.k()},
          {"weighting", weighting == Weighting::Probability ? "probability" : "frex"},
          {"topics", std::move(topics)}};
}

}  // namespace lexis
