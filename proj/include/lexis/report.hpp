#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "lexis/corpus.hpp"
#include "lexis/topics.hpp"

namespace lexis {

inline constexpr std::string_view kVersion = "0.1.0";

std::string sha256_hex(std::string_view bytes);
// Throws Error{IoError}.
std::string sha256_file(const std::filesystem::path& path);

// UTC ISO-8601 time taken from SOURCE_DATE_EPOCH when set (reproducible
// runs), otherwise the current time.
std::string run_timestamp();

struct HashedFile {
  std::string path;
  std::string sha256;
};

struct RunManifest {
  std::string command;
  std::map<std::string, std::string> parameters;  // effective option values
  std::vector<std::uint64_t> seeds;
  std::vector<HashedFile> inputs;
  std::vector<HashedFile> outputs;  // paths relative to the run directory
  std::string version = std::string(kVersion);
  std::string timestamp;

  void add_input(const std::filesystem::path& path);
};

nlohmann::ordered_json to_json(const RunManifest& manifest);

struct ReportOptions {
  std::vector<std::string> sketch_lemmas = {"economia"};
  std::optional<double> min_score = 9.0;
  std::size_t top_words = 10;
  std::size_t max_per_relation = 10;
  bool svg = false;
};

// Writes one JSON file per figure into `dir` (created if needed):
//   topic_words.json, topic_proportions.json, phase_effects.json,
//   week_estimates.json and sketch_<lemma>.json per requested lemma,
// plus SVG renderings of proportions and weekly estimates when asked, and
// manifest.json last. Analyses the data cannot support (one phase, untagged
// corpus) are written with "available": false and a reason.
// Returns the manifest as written.
RunManifest emit_report(const TopicModel& model, const Corpus& corpus,
                        const std::filesystem::path& dir, const ReportOptions& options = {},
                        RunManifest manifest = {});

// Figure payloads, exposed for the service and tests.
nlohmann::ordered_json topic_words_figure(const TopicModel& model, std::size_t n);
nlohmann::ordered_json proportions_figure(const TopicModel& model);
nlohmann::ordered_json phase_effects_figure(const TopicModel& model, const Corpus& corpus);
nlohmann::ordered_json week_estimates_figure(const TopicModel& model, const Corpus& corpus);
nlohmann::ordered_json sketch_figure(const Corpus& corpus, std::string_view lemma,
                                     std::optional<double> min_score, std::size_t max_per_relation);

std::string proportions_svg(const nlohmann::ordered_json& proportions);
std::string week_estimates_svg(const nlohmann::ordered_json& weeks);

}  // namespace lexis
