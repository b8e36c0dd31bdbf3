#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lexis/corpus.hpp"

namespace lexis {

struct ManifestRow {
  std::string file;
  std::string id;
  std::optional<std::string> source;
};

// Metadata table read from CSV with header `file,id,source`. Rows are matched
// against an input path first verbatim, then by file name.
class Manifest {
 public:
  Manifest() = default;
  explicit Manifest(std::vector<ManifestRow> rows) : rows_(std::move(rows)) {}

  static Manifest read_csv(std::istream& in);
  static Manifest load(const std::filesystem::path& path);

  const ManifestRow* find(const std::filesystem::path& input) const;
  std::size_t size() const noexcept { return rows_.size(); }

 private:
  std::vector<ManifestRow> rows_;
};

// Raw UTF-8 text files. Lemmas are the lowercased surface forms; POS is UNKNOWN
// and there are no dependency relations. Paths are processed in sorted order.
Corpus ingest_raw(std::vector<std::filesystem::path> paths, const Manifest* manifest = nullptr);

// CoNLL-U files. `# newdoc id = ...` comments split a file into documents.
// Multiword range lines and empty nodes are skipped.
Corpus ingest_conllu(std::vector<std::filesystem::path> paths, const Manifest* manifest = nullptr);

// Parses CoNLL-U from a stream; `name` is used in error messages and for
// filename-based id resolution.
Corpus ingest_conllu(std::istream& in, const std::filesystem::path& name,
                     const Manifest* manifest = nullptr);

// Expands directories into the .txt / .conllu files they contain.
std::vector<std::filesystem::path> expand_inputs(const std::vector<std::filesystem::path>& inputs,
                                                 const std::string& extension);

void save_corpus(const Corpus& corpus, std::ostream& out);
void save_corpus(const Corpus& corpus, const std::filesystem::path& path);
Corpus load_corpus(std::istream& in);
Corpus load_corpus(const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);

}  // namespace lexis
