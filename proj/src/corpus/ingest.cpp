#include "lexis/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "lexis/csv.hpp"
#include "lexis/error.hpp"
#include "lexis/text.hpp"

namespace lexis {
namespace fs = std::filesystem;

namespace {

constexpr std::string_view kCorpusFormat = "lexis.corpus";
constexpr int kCorpusVersion = 1;

std::string trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return std::string(s);
}

std::optional<int> to_int(std::string_view s) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

void check_unique(const std::vector<Document>& docs) {
  std::set<DocumentId> ids;
  for (const auto& d : docs) {
    if (!ids.insert(d.id()).second) {
      throw Error(Errc::DuplicateDocument, fmt::format("duplicate document id {}", d.id().str()));
    }
  }
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto tab = line.find('\t', start);
    out.push_back(line.substr(start, tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  return out;
}

// Documents collected from one CoNLL-U source before id resolution.
struct PendingDoc {
  std::optional<std::string> newdoc_id;
  std::vector<Token> tokens;
};

}  // namespace

Manifest Manifest::read_csv(std::istream& in) {
  auto rows = csv::read(in);
  if (rows.empty()) throw Error(Errc::ParseError, "manifest: missing header");
  const auto& header = rows.front();
  auto column = [&](std::string_view name) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (trim(header[i]) == name) return i;
    }
    return std::nullopt;
  };
  const auto file_col = column("file");
  const auto id_col = column("id");
  const auto source_col = column("source");
  if (!file_col || !id_col) {
    throw Error(Errc::ParseError, "manifest: header must be file,id,source");
  }
  std::vector<ManifestRow> out;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    auto get = [&](std::optional<std::size_t> c) {
      return c && *c < row.size() ? trim(row[*c]) : std::string{};
    };
    ManifestRow m{get(file_col), get(id_col), std::nullopt};
    if (m.file.empty()) {
      throw Error(Errc::ParseError, fmt::format("manifest: line {} has no file", r + 1));
    }
    if (auto s = get(source_col); !s.empty()) m.source = s;
    out.push_back(std::move(m));
  }
  return Manifest(std::move(out));
}

Manifest Manifest::load(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoError, fmt::format("cannot open manifest {}", path.string()));
  return read_csv(in);
}

const ManifestRow* Manifest::find(const fs::path& input) const {
  const std::string full = input.generic_string();
  for (const auto& r : rows_) {
    if (r.file == full) return &r;
  }
  const std::string name = input.filename().string();
  for (const auto& r : rows_) {
    if (fs::path(r.file).filename().string() == name) return &r;
  }
  return nullptr;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoError, fmt::format("cannot open {}", path.string()));
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::vector<fs::path> expand_inputs(const std::vector<fs::path>& inputs,
                                    const std::string& extension) {
  std::vector<fs::path> out;
  for (const auto& p : inputs) {
    if (fs::is_directory(p)) {
      for (const auto& entry : fs::recursive_directory_iterator(p)) {
        if (entry.is_regular_file() && entry.path().extension() == extension) {
          out.push_back(entry.path());
        }
      }
    } else {
      out.push_back(p);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

Corpus ingest_raw(std::vector<fs::path> paths, const Manifest* manifest) {
  std::sort(paths.begin(), paths.end());
  std::vector<Document> docs;
  docs.reserve(paths.size());
  for (const auto& path : paths) {
    const ManifestRow* row = manifest ? manifest->find(path) : nullptr;
    DocumentId id;
    if (row && !row->id.empty()) {
      id = parse_document_id(row->id);
    } else if (auto parsed = try_parse_document_id(path.stem().string())) {
      id = *parsed;
    } else {
      throw Error(Errc::MissingMetadata,
                  fmt::format("{}: no document id in file name or manifest", path.string()));
    }

    std::vector<Token> tokens;
    int offset = 0;
    int sent = 0;
    for (const auto& sentence : text::segment(read_file(path))) {
      int position = 0;
      for (const auto& surface : sentence) {
        Token t;
        t.surface = surface;
        t.lemma = text::to_lower(surface);
        t.id = ++position;
        t.sent = sent;
        t.offset = offset++;
        tokens.push_back(std::move(t));
      }
      ++sent;
    }
    if (tokens.empty()) {
      throw Error(Errc::EmptyDocument, fmt::format("{}: document is empty", path.string()));
    }
    docs.emplace_back(id, std::move(tokens), row ? row->source : std::nullopt);
  }
  check_unique(docs);
  return Corpus::from_documents(std::move(docs));
}

Corpus ingest_conllu(std::istream& in, const fs::path& name, const Manifest* manifest) {
  std::vector<PendingDoc> pending(1);
  std::vector<Token> sentence;
  std::vector<std::size_t> sentence_lines;
  int sent = 0;
  int offset = 0;
  std::size_t line_no = 0;

  auto fail = [&](std::size_t line, const std::string& what) {
    return Error(Errc::ParseError, fmt::format("{}:{}: {}", name.string(), line, what));
  };
  auto close_sentence = [&] {
    if (sentence.empty()) return;
    int max_id = 0;
    for (const auto& t : sentence) max_id = std::max(max_id, t.id);
    for (std::size_t i = 0; i < sentence.size(); ++i) {
      const auto& head = sentence[i].head;
      if (head && (*head < 0 || *head > max_id)) {
        throw fail(sentence_lines[i], fmt::format("HEAD {} outside sentence", *head));
      }
    }
    auto& tokens = pending.back().tokens;
    for (auto& t : sentence) tokens.push_back(std::move(t));
    sentence.clear();
    sentence_lines.clear();
    ++sent;
  };

  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      close_sentence();
      continue;
    }
    if (line.front() == '#') {
      const std::string body = trim(std::string_view(line).substr(1));
      if (body.rfind("newdoc", 0) == 0) {
        close_sentence();
        if (!pending.back().tokens.empty() || pending.back().newdoc_id) pending.emplace_back();
        const auto eq = body.find('=');
        if (eq != std::string::npos) pending.back().newdoc_id = trim(body.substr(eq + 1));
      }
      continue;
    }
    const auto cols = split_tabs(line);
    if (cols.size() != 10) {
      throw fail(line_no, fmt::format("expected 10 tab-separated columns, found {}", cols.size()));
    }
    if (cols[0].find('-') != std::string::npos || cols[0].find('.') != std::string::npos) {
      continue;  // multiword token range or empty node
    }
    const auto id = to_int(cols[0]);
    if (!id || *id < 1) throw fail(line_no, fmt::format("invalid ID '{}'", cols[0]));
    if (!sentence.empty() && *id <= sentence.back().id) {
      throw fail(line_no, fmt::format("ID {} is not increasing", *id));
    }
    Token t;
    t.surface = cols[1];
    t.lemma = cols[2] == "_" && cols[1] != "_" ? text::to_lower(cols[1]) : cols[2];
    t.pos = parse_upos(cols[3]);
    t.id = *id;
    if (cols[6] != "_") {
      const auto head = to_int(cols[6]);
      if (!head) throw fail(line_no, fmt::format("invalid HEAD '{}'", cols[6]));
      t.head = *head;
    }
    if (cols[7] != "_") t.deprel = cols[7];
    t.sent = sent;
    t.offset = offset++;
    sentence.push_back(std::move(t));
    sentence_lines.push_back(line_no);
  }
  close_sentence();

  std::erase_if(pending, [](const PendingDoc& p) { return p.tokens.empty() && !p.newdoc_id; });
  const ManifestRow* row = manifest ? manifest->find(name) : nullptr;
  std::vector<Document> docs;
  for (auto& p : pending) {
    std::optional<DocumentId> id;
    if (row && !row->id.empty() && pending.size() == 1) {
      id = parse_document_id(row->id);
    }
    if (!id && p.newdoc_id) id = try_parse_document_id(*p.newdoc_id);
    if (!id && pending.size() == 1) id = try_parse_document_id(name.stem().string());
    if (!id) {
      throw Error(Errc::MissingMetadata,
                  fmt::format("{}: document {} has no resolvable id", name.string(),
                              p.newdoc_id.value_or("<unnamed>")));
    }
    if (p.tokens.empty()) {
      throw Error(Errc::EmptyDocument, fmt::format("{}: document {} is empty", name.string(),
                                                   id->str()));
    }
    // Offsets restart per document.
    int o = 0;
    const int first_sent = p.tokens.front().sent;
    for (auto& t : p.tokens) {
      t.offset = o++;
      t.sent -= first_sent;
    }
    docs.emplace_back(*id, std::move(p.tokens), row ? row->source : std::nullopt);
  }
  return Corpus::from_documents(std::move(docs));
}

Corpus ingest_conllu(std::vector<fs::path> paths, const Manifest* manifest) {
  std::sort(paths.begin(), paths.end());
  std::vector<std::shared_ptr<const Document>> all;
  std::vector<Document> check;
  for (const auto& path : paths) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::IoError, fmt::format("cannot open {}", path.string()));
    const Corpus part = ingest_conllu(in, path, manifest);
    for (const auto& d : part.documents()) {
      all.push_back(d);
      check.push_back(*d);
    }
  }
  check_unique(check);
  return Corpus(std::move(all));
}

void save_corpus(const Corpus& corpus, std::ostream& out) {
  nlohmann::ordered_json docs = nlohmann::ordered_json::array();
  for (const auto& d : corpus.documents()) {
    nlohmann::ordered_json tokens = nlohmann::ordered_json::array();
    for (const auto& t : d->tokens()) {
      tokens.push_back({t.surface, t.lemma, to_string(t.pos), t.id,
                        t.head ? nlohmann::ordered_json(*t.head) : nlohmann::ordered_json(nullptr),
                        t.deprel.empty() ? nlohmann::ordered_json(nullptr)
                                         : nlohmann::ordered_json(t.deprel),
                        t.sent, t.offset});
    }
    nlohmann::ordered_json doc;
    doc["id"] = d->id().str();
    doc["source"] = d->source() ? nlohmann::ordered_json(*d->source()) : nlohmann::ordered_json(nullptr);
    doc["tokens"] = std::move(tokens);
    docs.push_back(std::move(doc));
  }
  nlohmann::ordered_json root;
  root["format"] = kCorpusFormat;
  root["version"] = kCorpusVersion;
  root["token_fields"] = {"surface", "lemma", "upos", "id", "head", "deprel", "sent", "offset"};
  root["documents"] = std::move(docs);
  out << root.dump() << '\n';
}

void save_corpus(const Corpus& corpus, const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::IoError, fmt::format("cannot write {}", path.string()));
  save_corpus(corpus, out);
}

Corpus load_corpus(std::istream& in) {
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::MalformedContainer, fmt::format("corpus container: {}", e.what()));
  }
  if (root.value("format", "") != kCorpusFormat || root.value("version", 0) != kCorpusVersion) {
    throw Error(Errc::MalformedContainer, "corpus container: unsupported format or version");
  }
  std::vector<Document> docs;
  try {
    for (const auto& d : root.at("documents")) {
      std::vector<Token> tokens;
      for (const auto& row : d.at("tokens")) {
        Token t;
        t.surface = row.at(0).get<std::string>();
        t.lemma = row.at(1).get<std::string>();
        t.pos = parse_upos(row.at(2).get<std::string>());
        t.id = row.at(3).get<int>();
        if (!row.at(4).is_null()) t.head = row.at(4).get<int>();
        if (!row.at(5).is_null()) t.deprel = row.at(5).get<std::string>();
        t.sent = row.at(6).get<int>();
        t.offset = row.at(7).get<int>();
        tokens.push_back(std::move(t));
      }
      std::optional<std::string> source;
      if (!d.at("source").is_null()) source = d.at("source").get<std::string>();
      docs.emplace_back(parse_document_id(d.at("id").get<std::string>()), std::move(tokens),
                        std::move(source));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::MalformedContainer, fmt::format("corpus container: {}", e.what()));
  }
  check_unique(docs);
  return Corpus::from_documents(std::move(docs));
}

Corpus load_corpus(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoError, fmt::format("cannot open {}", path.string()));
  return load_corpus(in);
}

}  // namespace lexis
