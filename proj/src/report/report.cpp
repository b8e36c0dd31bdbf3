#include "lexis/report.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>

#include <fmt/format.h>
#include <openssl/evp.h>

#include "lexis/colloc.hpp"
#include "lexis/error.hpp"
#include "lexis/ingest.hpp"

namespace lexis {
namespace {

using ojson = nlohmann::ordered_json;

const char* kPalette[] = {"#1b9e77", "#d95f02", "#7570b3", "#e7298a",
                          "#66a61e", "#e6ab02", "#a6761d", "#666666"};

void mark_unavailable(ojson& out, const Error& e) {
  out["available"] = false;
  out["reason"] = fmt::format("{}: {}", to_string(e.code()), e.what());
}

// Keeps ASCII letters, digits, '-' and '_' plus all non-ASCII bytes.
std::string file_stem(std::string_view lemma) {
  std::string out;
  for (unsigned char c : lemma) {
    const bool keep = c >= 0x80 || std::isalnum(c) || c == '-' || c == '_';
    out.push_back(keep ? static_cast<char>(c) : '_');
  }
  return out.empty() ? std::string("_") : out;
}

void write_text(const std::filesystem::path& path, std::string_view body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::IoError, fmt::format("cannot write {}", path.string()));
  out << body;
  if (!out) throw Error(Errc::IoError, fmt::format("cannot write {}", path.string()));
}

std::string svg_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

}  // namespace

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error(Errc::IoError, "sha256 failed");
  }
  std::string out;
  out.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) out += fmt::format("{:02x}", digest[i]);
  return out;
}

std::string sha256_file(const std::filesystem::path& path) { return sha256_hex(read_file(path)); }

std::string run_timestamp() {
  std::time_t t = 0;
  if (const char* env = std::getenv("SOURCE_DATE_EPOCH"); env && *env) {
    char* end = nullptr;
    const long long v = std::strtoll(env, &end, 10);
    if (*end != '\0' || v < 0) {
      throw Error(Errc::InvalidConfig, fmt::format("SOURCE_DATE_EPOCH is not a timestamp: {}", env));
    }
    t = static_cast<std::time_t>(v);
  } else {
    t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  }
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void RunManifest::add_input(const std::filesystem::path& path) {
  inputs.push_back({path.generic_string(), sha256_file(path)});
}

ojson to_json(const RunManifest& m) {
  auto files = [](const std::vector<HashedFile>& v) {
    ojson out = ojson::array();
    for (const auto& f : v) out.push_back({{"path", f.path}, {"sha256", f.sha256}});
    return out;
  };
  ojson params = ojson::object();
  for (const auto& [k, v] : m.parameters) params[k] = v;
  return {{"format", "lexis.run-manifest"},
          {"version", m.version},
          {"command", m.command},
          {"parameters", std::move(params)},
          {"seeds", m.seeds},
          {"inputs", files(m.inputs)},
          {"outputs", files(m.outputs)},
          {"timestamp", m.timestamp}};
}

ojson topic_words_figure(const TopicModel& model, std::size_t n) {
  ojson topics = ojson::array();
  for (std::size_t k = 0; k < model.k(); ++k) {
    auto words = [&](Weighting w) {
      ojson out = ojson::array();
      for (const auto& x : top_words(model, k, n, w)) out.push_back({{"lemma", x.lemma}, {"weight", x.weight}});
      return out;
    };
    topics.push_back({{"topic", k},
                      {"label", model.topic_name(k)},
                      {"probability", words(Weighting::Probability)},
                      {"frex", words(Weighting::Frex)}});
  }
  return {{"figure", "topic_words"}, {"k", model.k()}, {"topics", std::move(topics)}};
}

ojson proportions_figure(const TopicModel& model) {
  ojson topics = ojson::array();
  for (std::size_t k = 0; k < model.k(); ++k) {
    double share = 0.0;
    for (std::size_t d = 0; d < model.theta.rows; ++d) share += model.theta(d, k);
    if (model.theta.rows > 0) share /= static_cast<double>(model.theta.rows);
    topics.push_back({{"topic", k}, {"label", model.topic_name(k)}, {"proportion", share}});
  }
  return {{"figure", "topic_proportions"}, {"topics", std::move(topics)}};
}

namespace {

ojson covariate_figure(const char* name, const TopicModel& model, const Corpus& corpus, Covariate cov) {
  ojson out = {{"figure", name}};
  out["prevalence"] = to_json(prevalence_by(model, corpus, cov), model, cov);
  try {
    out["effects"] = to_json(estimate_effect(model, corpus, cov));
    out["available"] = true;
  } catch (const Error& e) {
    if (e.code() != Errc::DegenerateDesign) throw;
    mark_unavailable(out, e);
  }
  return out;
}

}  // namespace

ojson phase_effects_figure(const TopicModel& model, const Corpus& corpus) {
  return covariate_figure("phase_effects", model, corpus, Covariate::Phase);
}

ojson week_estimates_figure(const TopicModel& model, const Corpus& corpus) {
  return covariate_figure("week_estimates", model, corpus, Covariate::Week);
}

ojson sketch_figure(const Corpus& corpus, std::string_view lemma, std::optional<double> min_score,
                    std::size_t max_per_relation) {
  ojson out = {{"figure", "word_sketch"}, {"lemma", lemma}};
  try {
    out["graph"] = sketch_graph(word_sketch(corpus, lemma, max_per_relation, min_score), min_score);
    out["available"] = true;
  } catch (const Error& e) {
    if (e.code() != Errc::RelationsUnavailable) throw;
    mark_unavailable(out, e);
  }
  return out;
}

std::string proportions_svg(const ojson& fig) {
  const auto& topics = fig.at("topics");
  const double bar = 28, gap = 10, left = 140, width = 360;
  const double height = 20 + static_cast<double>(topics.size()) * (bar + gap);
  std::string out = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" font-family=\"sans-serif\" "
      "font-size=\"12\">\n",
      left + width + 60, height);
  double y = 10;
  for (std::size_t i = 0; i < topics.size(); ++i) {
    const auto& t = topics[i];
    const double p = t.at("proportion").get<double>();
    out += fmt::format("<text x=\"{}\" y=\"{:.1f}\" text-anchor=\"end\">{}</text>\n", left - 8,
                       y + bar * 0.65, svg_escape(t.at("label").get<std::string>()));
    out += fmt::format("<rect x=\"{}\" y=\"{:.1f}\" width=\"{:.2f}\" height=\"{}\" fill=\"{}\"/>\n", left, y,
                       p * width, bar, kPalette[i % std::size(kPalette)]);
    out += fmt::format("<text x=\"{:.2f}\" y=\"{:.1f}\">{:.3f}</text>\n", left + p * width + 4,
                       y + bar * 0.65, p);
    y += bar + gap;
  }
  out += "</svg>\n";
  return out;
}

std::string week_estimates_svg(const ojson& fig) {
  const auto& prev = fig.at("prevalence");
  const auto& groups = prev.at("groups");
  const auto& topics = prev.at("topics");
  const double left = 50, top = 20, w = 560, h = 300;
  std::string out = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" font-family=\"sans-serif\" "
      "font-size=\"11\">\n",
      left + w + 140, top + h + 40);
  out += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#999\"/>\n", left,
                     top, w, h);
  if (groups.empty()) return out + "</svg>\n";
  const double n = static_cast<double>(groups.size());
  auto x_at = [&](std::size_t i) { return left + (n == 1 ? w / 2 : w * static_cast<double>(i) / (n - 1)); };
  auto y_at = [&](double v) { return top + h * (1.0 - v); };
  for (std::size_t i = 0; i < groups.size(); ++i) {
    out += fmt::format("<text x=\"{:.1f}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n", x_at(i), top + h + 16,
                       groups[i].at("week").get<int>());
  }
  for (std::size_t k = 0; k < topics.size(); ++k) {
    const char* colour = kPalette[k % std::size(kPalette)];
    if (groups[0].contains("lower")) {
      std::string pts;
      for (std::size_t i = 0; i < groups.size(); ++i) {
        pts += fmt::format("{:.1f},{:.1f} ", x_at(i), y_at(groups[i]["upper"][k].get<double>()));
      }
      for (std::size_t i = groups.size(); i-- > 0;) {
        pts += fmt::format("{:.1f},{:.1f} ", x_at(i), y_at(groups[i]["lower"][k].get<double>()));
      }
      out += fmt::format("<polygon points=\"{}\" fill=\"{}\" fill-opacity=\"0.2\" stroke=\"none\"/>\n", pts,
                         colour);
    }
    std::string pts;
    for (std::size_t i = 0; i < groups.size(); ++i) {
      pts += fmt::format("{:.1f},{:.1f} ", x_at(i), y_at(groups[i]["mean"][k].get<double>()));
    }
    out += fmt::format("<polyline points=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"2\"/>\n", pts, colour);
    out += fmt::format("<text x=\"{}\" y=\"{}\" fill=\"{}\">{}</text>\n", left + w + 10,
                       top + 14 * static_cast<double>(k + 1), colour,
                       svg_escape(topics[k].get<std::string>()));
  }
  out += "</svg>\n";
  return out;
}

RunManifest emit_report(const TopicModel& model, const Corpus& corpus, const std::filesystem::path& dir,
                        const ReportOptions& options, RunManifest manifest) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(Errc::IoError, fmt::format("cannot create {}: {}", dir.string(), ec.message()));

  auto put = [&](const std::string& name, const std::string& body) {
    write_text(dir / name, body);
    manifest.outputs.push_back({name, sha256_hex(body)});
  };
  auto put_json = [&](const std::string& name, const ojson& j) { put(name, j.dump(2) + "\n"); };

  put_json("topic_words.json", topic_words_figure(model, options.top_words));
  const auto props = proportions_figure(model);
  put_json("topic_proportions.json", props);
  put_json("phase_effects.json", phase_effects_figure(model, corpus));
  const auto weeks = week_estimates_figure(model, corpus);
  put_json("week_estimates.json", weeks);
  for (const auto& lemma : options.sketch_lemmas) {
    put_json(fmt::format("sketch_{}.json", file_stem(lemma)),
             sketch_figure(corpus, lemma, options.min_score, options.max_per_relation));
  }
  if (options.svg) {
    put("topic_proportions.svg", proportions_svg(props));
    put("week_estimates.svg", week_estimates_svg(weeks));
  }
  if (manifest.command.empty()) manifest.command = "report";
  if (manifest.timestamp.empty()) manifest.timestamp = run_timestamp();
  write_text(dir / "manifest.json", to_json(manifest).dump(2) + "\n");
  return manifest;
}

}  // namespace lexis
