#include "cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "lexis/colloc.hpp"
#include "lexis/concord.hpp"
#include "lexis/display.hpp"
#include "lexis/error.hpp"
#include "lexis/ingest.hpp"
#include "lexis/metaphor.hpp"
#include "lexis/preprocess.hpp"
#include "lexis/report.hpp"
#include "lexis/service.hpp"
#include "lexis/topics.hpp"

namespace lexis::cli {
namespace {

namespace fs = std::filesystem;

// A malformed argument detected after CLI11 parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int exit_code(Errc code) {
  switch (code) {
    case Errc::InvalidFilter:
    case Errc::InvalidConfig:
    case Errc::InvalidPattern:
      return 1;
    default:
      return 2;
  }
}

// Corpus container file, a single .conllu/.txt file, or a directory holding
// corpus.json or .conllu/.txt files.
Corpus open_corpus(const fs::path& p, const std::string& metadata) {
  if (p.empty()) throw UsageError("no corpus given (use --corpus or set LEXIS_CORPUS)");
  std::optional<Manifest> manifest;
  if (!metadata.empty()) manifest = Manifest::load(metadata);
  const Manifest* m = manifest ? &*manifest : nullptr;
  if (fs::is_directory(p)) {
    if (fs::exists(p / "corpus.json")) return load_corpus(p / "corpus.json");
    if (auto files = expand_inputs({p}, ".conllu"); !files.empty()) return ingest_conllu(files, m);
    if (auto files = expand_inputs({p}, ".txt"); !files.empty()) return ingest_raw(files, m);
    throw Error(Errc::IoError, fmt::format("{} holds no corpus.json, .conllu or .txt files", p.string()));
  }
  if (!fs::exists(p)) throw Error(Errc::IoError, fmt::format("no corpus at {}", p.string()));
  if (p.extension() == ".conllu") return ingest_conllu(std::vector<fs::path>{p}, m);
  if (p.extension() == ".txt") return ingest_raw(std::vector<fs::path>{p}, m);
  return load_corpus(p);
}

Corpus filtered(const Corpus& c, const std::string& filter) {
  return filter.empty() ? c : c.subcorpus(SubcorpusFilter::parse(filter));
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string part; std::getline(ss, part, ',');) {
    if (!part.empty()) out.push_back(part);
  }
  return out;
}

// Input files behind a corpus path, for hashing.
std::vector<fs::path> corpus_files(const fs::path& p) {
  if (!fs::is_directory(p)) return {p};
  std::vector<fs::path> out;
  for (const auto& e : fs::recursive_directory_iterator(p)) {
    if (e.is_regular_file()) out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

struct Options {
  std::string corpus;
  std::string metadata;
  std::string filter;
  std::string out;
  bool json = false;
};

class Runner {
 public:
  Runner(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

  int run(int argc, const char* const* argv);

 private:
  // Sends `body` from the shared handler to stdout; maps error statuses onto
  // exit codes.
  int emit(const Corpus& corpus, std::optional<TopicModel> model, std::string_view path,
           const QueryParams& params, LexiconPack lexicons = default_lexicons());
  std::ostream& sink();
  void common(CLI::App* sub, bool filter = true, bool json = true);

  std::ostream& out_;
  std::ostream& err_;
  Options o_;
  std::ofstream file_;
};

std::ostream& Runner::sink() {
  if (o_.out.empty()) return out_;
  file_.open(o_.out, std::ios::binary);
  if (!file_) throw Error(Errc::IoError, fmt::format("cannot write {}", o_.out));
  return file_;
}

int Runner::emit(const Corpus& corpus, std::optional<TopicModel> model, std::string_view path,
                 const QueryParams& params, LexiconPack lexicons) {
  ServiceState state;
  state.corpus = corpus;
  state.model = std::move(model);
  state.lexicons = std::move(lexicons);
  const auto r = handle(state, path, params);
  if (r.status != 200) {
    const auto j = nlohmann::json::parse(r.body);
    err_ << "error: " << j["error"]["code"].get<std::string>() << ": "
         << j["error"]["message"].get<std::string>() << "\n";
    return r.status == 400 ? 1 : 2;
  }
  sink() << r.body << "\n";
  return 0;
}

void Runner::common(CLI::App* sub, bool filter, bool json) {
  sub->add_option("--corpus", o_.corpus, "Corpus file or directory")->envname("LEXIS_CORPUS");
  sub->add_option("--metadata", o_.metadata, "CSV with file,id,source rows for raw inputs");
  if (filter) sub->add_option("--filter", o_.filter, "Subcorpus filter, e.g. phase=1,week=2-5");
  if (json) sub->add_flag("--json", o_.json, "Print the JSON body the query service returns");
}

int Runner::run(int argc, const char* const* argv) {
  CLI::App app{"Corpus workbench: concordances, collocations, topic models and metaphor candidates", "lexis"};
  app.set_config("--config", "", "Read options from a key = value file");
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  // ingest
  std::vector<std::string> inputs;
  std::string format = "auto";
  auto* ingest = app.add_subcommand("ingest", "Read CoNLL-U or raw text into a corpus file");
  ingest->add_option("inputs", inputs, "Files or directories")->required();
  ingest->add_option("--format", format, "auto, conllu or raw")
      ->check(CLI::IsMember({"auto", "conllu", "raw"}));
  ingest->add_option("--metadata", o_.metadata, "CSV with file,id,source rows");
  ingest->add_option("--out", o_.out, "Corpus file to write")->required();

  // preprocess
  std::string stoplist;
  bool keep_hapax = false, keep_punct = false, keep_numbers = false, keep_case = false;
  auto* prep = app.add_subcommand("preprocess", "Stoplist, punctuation, number and hapax removal");
  common(prep, false, false);
  prep->add_option("--stoplist", stoplist, "One lemma per line; replaces the built-in list");
  prep->add_flag("--keep-hapax", keep_hapax);
  prep->add_flag("--keep-punct", keep_punct);
  prep->add_flag("--keep-numbers", keep_numbers);
  prep->add_flag("--keep-case", keep_case);
  prep->add_option("--out", o_.out, "Corpus file to write")->required();

  // fit
  ModelConfig cfg;
  double alpha = 0.0;
  std::string labels;
  auto* fitc = app.add_subcommand("fit", "Fit an LDA topic model by collapsed Gibbs sampling");
  common(fitc, true, false);
  fitc->add_option("--k", cfg.k, "Number of topics")->capture_default_str();
  fitc->add_option("--seed", cfg.seed)->capture_default_str();
  fitc->add_option("--alpha", alpha, "Document-topic prior (default 50/k)");
  fitc->add_option("--beta", cfg.beta)->capture_default_str();
  fitc->add_option("--iterations", cfg.iterations)->capture_default_str();
  fitc->add_option("--burnin", cfg.burnin)->capture_default_str();
  fitc->add_option("--thin", cfg.thin)->capture_default_str();
  fitc->add_option("--labels", labels, "Comma-separated topic labels");
  fitc->add_option("--out", o_.out, "Model file to write")->capture_default_str();

  // searchk
  std::vector<int> ks;
  unsigned threads = 0;
  auto* sk = app.add_subcommand("searchk", "Compare candidate numbers of topics");
  common(sk, true, true);
  sk->add_option("--k", ks, "Candidate K values")->delimiter(',')->required();
  sk->add_option("--seed", cfg.seed);
  sk->add_option("--iterations", cfg.iterations);
  sk->add_option("--burnin", cfg.burnin);
  sk->add_option("--thin", cfg.thin);
  sk->add_option("--threads", threads, "Worker threads (0: hardware)");
  sk->add_option("--out", o_.out);

  // effects / prevalence
  std::string model_path, covariate = "phase";
  auto* eff = app.add_subcommand("effects", "Regress topic proportions on phase or week");
  common(eff);
  eff->add_option("--model", model_path)->required();
  eff->add_option("--covariate", covariate)->check(CLI::IsMember({"phase", "week"}));
  eff->add_option("--out", o_.out);
  auto* prev = app.add_subcommand("prevalence", "Mean topic proportions per phase or week");
  common(prev);
  prev->add_option("--model", model_path)->required();
  prev->add_option("--by", covariate)->check(CLI::IsMember({"phase", "week"}));
  prev->add_option("--out", o_.out);

  // freq / colloc / sketch / sketchdiff
  std::string lemma, relation = "window";
  int span = 5;
  std::size_t min_pair = 1, max_per_rel = 10;
  std::optional<double> min_score;
  auto* fq = app.add_subcommand("freq", "Hits and per-million rate of a lemma");
  common(fq);
  fq->add_option("--lemma", lemma)->required();

  auto* co = app.add_subcommand("colloc", "Collocates of a lemma under one relation");
  common(co, true, false);
  co->add_option("--lemma", lemma)->required();
  co->add_option("--relation", relation, "window, modifier, subject-of or object-of")->capture_default_str();
  co->add_option("--span", span, "Window span on each side")->capture_default_str();
  co->add_option("--min-pair", min_pair)->capture_default_str();
  co->add_option("--out", o_.out);

  std::string relations;
  auto* sketch = app.add_subcommand("sketch", "Word sketch: top collocates per relation");
  common(sketch);
  sketch->add_option("--lemma", lemma)->required();
  sketch->add_option("--relation", relations, "Comma-separated relations (default: dependency relations)");
  sketch->add_option("--min-score", min_score, "Drop collocates scoring below this logDice");
  sketch->add_option("--max-per-rel", max_per_rel)->capture_default_str();

  std::string side_a, side_b;
  auto* diff = app.add_subcommand("sketchdiff", "Contrast a lemma's sketches across two subcorpora");
  common(diff, false, true);
  diff->add_option("--lemma", lemma)->required();
  diff->add_option("--a", side_a, "Filter for the first subcorpus");
  diff->add_option("--b", side_b, "Filter for the second subcorpus");
  diff->add_option("--relation", relations);

  // kwic / pattern
  std::string q, sort = "position";
  std::size_t page = 1, page_size = 50, width = 8;
  bool all_lines = false;
  auto* kw = app.add_subcommand("kwic", "Concordance lines as TSV");
  common(kw);
  kw->add_option("--q", q, "Lemma, or a token pattern such as [lemma=\"crisi\"] [pos=\"AUX\"]")->required();
  kw->add_option("--sort", sort)->check(CLI::IsMember({"position", "left", "right"}));
  kw->add_option("--page", page)->capture_default_str();
  kw->add_option("--page-size", page_size)->capture_default_str();
  kw->add_option("--width", width)->capture_default_str();
  kw->add_flag("--all", all_lines, "Every line instead of one page");
  kw->add_option("--out", o_.out);

  std::string y;
  auto* pat = app.add_subcommand("pattern", "Copular \"X is a Y\" extraction");
  common(pat);
  pat->add_option("--y", y, "The predicate noun, e.g. tsunami")->required();

  // metaphors
  std::string targets = "economia,società,virus", lexicon, scope = "sentence", matrix_out;
  auto* met = app.add_subcommand("metaphors", "Flag target / source-domain co-occurrences");
  common(met);
  met->add_option("--targets", targets)->capture_default_str();
  met->add_option("--lexicon", lexicon, "Lexicon JSON (default: built-in pack)");
  met->add_option("--scope", scope, "sentence or window:N")->capture_default_str();
  met->add_option("--model", model_path, "Topic model for the topic x domain matrix");
  met->add_option("--matrix-out", matrix_out, "Write the topic x domain matrix JSON here");
  met->add_option("--out", o_.out);

  // report
  std::vector<std::string> sketch_lemmas = {"economia"};
  std::size_t top_n = 10;
  bool svg = false;
  double report_min_score = 9.0;
  auto* rep = app.add_subcommand("report", "Write figure data files and a run manifest");
  common(rep, true, false);
  rep->add_option("--model", model_path)->required();
  rep->add_option("--out", o_.out, "Run directory")->required();
  rep->add_option("--lemma", sketch_lemmas, "Lemmas to sketch")->capture_default_str();
  rep->add_option("--min-score", report_min_score)->capture_default_str();
  rep->add_option("--top-words", top_n)->capture_default_str();
  rep->add_flag("--svg", svg, "Also render SVG charts");

  // serve
  std::string host = "127.0.0.1", cors = "*";
  int port = 8080;
  auto* srv = app.add_subcommand("serve", "Read-only HTTP JSON API");
  common(srv, false, false);
  srv->add_option("--model", model_path);
  srv->add_option("--lexicon", lexicon);
  srv->add_option("--targets", targets)->capture_default_str();
  srv->add_option("--host", host)->capture_default_str();
  srv->add_option("--port", port)->capture_default_str();
  srv->add_option("--cors-origin", cors)->capture_default_str();

  o_.out.clear();
  fitc->get_option("--out")->default_str("model.json");

  if (argc > 1 && argv[1][0] != '-' && !app.get_subcommand_no_throw(argv[1])) {
    err_ << "error: unknown subcommand '" << argv[1] << "'\n" << app.help();
    return 1;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out_ << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    out_ << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::CallForVersion& e) {
    out_ << kVersion << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    err_ << "error: " << e.what() << "\n";
    const auto subs = app.get_subcommands();
    err_ << (subs.empty() ? app.help() : subs.front()->help());
    return 1;
  }

  try {
    if (*ingest) {
      std::vector<fs::path> paths(inputs.begin(), inputs.end());
      std::optional<Manifest> manifest;
      if (!o_.metadata.empty()) manifest = Manifest::load(o_.metadata);
      const Manifest* m = manifest ? &*manifest : nullptr;
      auto conllu = expand_inputs(paths, ".conllu");
      const bool as_conllu = format == "conllu" ||
                             (format == "auto" && std::all_of(conllu.begin(), conllu.end(), [](const fs::path& p) {
                                return p.extension() == ".conllu";
                              }) && !conllu.empty());
      const Corpus c = as_conllu ? ingest_conllu(conllu, m) : ingest_raw(expand_inputs(paths, ".txt"), m);
      save_corpus(c, fs::path(o_.out));
      err_ << fmt::format("{} documents, {} tokens -> {}\n", c.size(), c.token_count(), o_.out);
      return 0;
    }

    if (*prep) {
      auto pc = default_preprocess_config();
      if (!stoplist.empty()) pc.stoplist = load_stoplist(stoplist);
      pc.drop_hapax = !keep_hapax;
      pc.drop_punctuation = !keep_punct;
      pc.drop_numbers = !keep_numbers;
      pc.lowercase = !keep_case;
      const Corpus c = preprocess(open_corpus(o_.corpus, o_.metadata), pc,
                                  [this](std::string_view w) { err_ << "warning: " << w << "\n"; });
      save_corpus(c, fs::path(o_.out));
      err_ << fmt::format("{} documents, {} tokens -> {}\n", c.size(), c.token_count(), o_.out);
      return 0;
    }

    if (*fitc) {
      if (alpha > 0.0) cfg.alpha = alpha;
      cfg.validate();
      auto model = fit(filtered(open_corpus(o_.corpus, o_.metadata), o_.filter), cfg);
      if (!labels.empty()) {
        model.labels = split_commas(labels);
        if (model.labels.size() != model.k()) {
          throw UsageError(fmt::format("--labels needs {} names, got {}", model.k(), model.labels.size()));
        }
      }
      const fs::path out = o_.out.empty() ? fs::path("model.json") : fs::path(o_.out);
      save_model(model, out);
      err_ << fmt::format("k={} over {} documents -> {}\n", model.k(), model.documents.size(), out.string());
      return 0;
    }

    if (*sk) {
      const auto c = filtered(open_corpus(o_.corpus, o_.metadata), o_.filter);
      const auto rows = search_k(c, ks, cfg, threads);
      auto& s = sink();
      if (o_.json) {
        s << to_json(std::span<const KSearchRow>(rows)).dump() << "\n";
      } else {
        s << "k,heldout,coherence,exclusivity\n";
        for (const auto& r : rows) {
          s << fmt::format("{},{:.6g},{:.6g},{:.6g}\n", r.k, r.held_out_loglik, r.coherence, r.exclusivity);
        }
      }
      return 0;
    }

    if (*eff || *prev) {
      const auto c = open_corpus(o_.corpus, o_.metadata);
      auto model = load_model(model_path);
      QueryParams params;
      if (!o_.filter.empty()) params.emplace("filter", o_.filter);
      if (o_.json) {
        params.emplace(*eff ? "covariate" : "by", covariate);
        return emit(c, std::move(model), *eff ? "/effects" : "/prevalence", params);
      }
      const auto view = filtered(c, o_.filter);
      const auto cov = *parse_covariate(covariate);
      auto& s = sink();
      if (*eff) {
        write_effects_csv(s, estimate_effect(model, view, cov));
      } else {
        s << fmt::format("{},documents,topic,mean,lower,upper\n", to_string(cov));
        for (const auto& r : prevalence_by(model, view, cov)) {
          for (std::size_t k = 0; k < model.k(); ++k) {
            s << fmt::format("{},{},{},{:.6g},", r.level, r.documents, model.topic_name(k), r.mean[k]);
            if (r.lower.empty()) {
              s << ",\n";
            } else {
              s << fmt::format("{:.6g},{:.6g}\n", r.lower[k], r.upper[k]);
            }
          }
        }
      }
      return 0;
    }

    if (*fq) {
      const auto c = open_corpus(o_.corpus, o_.metadata);
      if (o_.json) {
        QueryParams params = {{"lemma", lemma}};
        if (!o_.filter.empty()) params.emplace("filter", o_.filter);
        return emit(c, std::nullopt, "/freq", params);
      }
      const auto r = freq(filtered(c, o_.filter), lemma);
      out_ << r.hits << " " << fixed2(r.pmw) << "\n";
      return 0;
    }

    if (*co) {
      const auto kind = parse_relation(relation);
      if (!kind) throw UsageError(fmt::format("unknown relation '{}'", relation));
      auto opts = default_relation_options();
      opts.window_span = span;
      const auto rows = collocations(filtered(open_corpus(o_.corpus, o_.metadata), o_.filter), lemma, *kind,
                                     min_pair, opts);
      write_collocations_csv(sink(), rows);
      return 0;
    }

    if (*sketch || *diff) {
      const auto c = open_corpus(o_.corpus, o_.metadata);
      QueryParams params = {{"lemma", lemma}};
      if (!relations.empty()) params.emplace("relation", relations);
      if (*sketch) {
        if (!o_.filter.empty()) params.emplace("filter", o_.filter);
        if (min_score) params.emplace("min_score", fmt::format("{}", *min_score));
        params.emplace("max_per_rel", std::to_string(max_per_rel));
        if (o_.json) return emit(c, std::nullopt, "/sketch", params);
        std::vector<RelationKind> kinds(default_sketch_relations());
        if (!relations.empty()) {
          kinds.clear();
          for (const auto& name : split_commas(relations)) {
            const auto k = parse_relation(name);
            if (!k) throw UsageError(fmt::format("unknown relation '{}'", name));
            kinds.push_back(*k);
          }
        }
        const auto ws = word_sketch(filtered(c, o_.filter), lemma, max_per_rel, min_score, kinds);
        out_ << "relation\tcollocate\tlogdice\tf_pair\n";
        for (const auto& rel : ws.relations) {
          for (const auto& x : rel.items) {
            out_ << fmt::format("{}\t{}\t{}\t{}\n", to_string(rel.relation), x.collocate, fixed2(x.logdice), x.f_pair);
          }
        }
        return 0;
      }
      if (!side_a.empty()) params.emplace("a", side_a);
      if (!side_b.empty()) params.emplace("b", side_b);
      if (o_.json) return emit(c, std::nullopt, "/sketchdiff", params);
      std::vector<RelationKind> kinds(default_sketch_relations());
      if (!relations.empty()) {
        kinds.clear();
        for (const auto& name : split_commas(relations)) {
          const auto k = parse_relation(name);
          if (!k) throw UsageError(fmt::format("unknown relation '{}'", name));
          kinds.push_back(*k);
        }
      }
      const auto rows = sketch_diff(filtered(c, side_a), filtered(c, side_b), lemma, kinds);
      auto opt = [](const std::optional<double>& v) { return v ? fixed2(*v) : std::string("-"); };
      out_ << "relation\tcollocate\tscore_a\tscore_b\tdelta\n";
      for (const auto& r : rows) {
        out_ << fmt::format("{}\t{}\t{}\t{}\t{}\n", to_string(r.relation), r.collocate, opt(r.score_a),
                            opt(r.score_b), opt(r.delta()));
      }
      return 0;
    }

    if (*kw) {
      const auto c = open_corpus(o_.corpus, o_.metadata);
      if (o_.json) {
        QueryParams params = {{"q", q},
                              {"sort", sort},
                              {"page", std::to_string(page)},
                              {"page_size", std::to_string(page_size)},
                              {"width", std::to_string(width)}};
        if (!o_.filter.empty()) params.emplace("filter", o_.filter);
        return emit(c, std::nullopt, "/kwic", params);
      }
      const auto query = KwicQuery::parse(q);
      const auto order = *parse_kwic_sort(sort);
      const auto view = filtered(c, o_.filter);
      if (all_lines) {
        write_kwic_tsv(sink(), kwic_all(view, query, width, order));
      } else {
        write_kwic_tsv(sink(), kwic(view, query, width, order, page, page_size).lines);
      }
      return 0;
    }

    if (*pat) {
      const auto c = open_corpus(o_.corpus, o_.metadata);
      if (o_.json) {
        QueryParams params = {{"y", y}};
        if (!o_.filter.empty()) params.emplace("filter", o_.filter);
        return emit(c, std::nullopt, "/pattern", params);
      }
      for (const auto& [x, n] : copular_pattern(filtered(c, o_.filter), y)) out_ << x << "\t" << n << "\n";
      return 0;
    }

    if (*met) {
      const auto c = open_corpus(o_.corpus, o_.metadata);
      auto pack = lexicon.empty() ? default_lexicons() : load_lexicons(lexicon);
      std::optional<TopicModel> model;
      if (!model_path.empty()) model = load_model(model_path);
      if (o_.json) {
        QueryParams params = {{"target", targets}, {"scope", scope}};
        if (!o_.filter.empty()) params.emplace("filter", o_.filter);
        return emit(c, std::move(model), "/metaphors", params, std::move(pack));
      }
      const auto parts = split_commas(targets);
      if (parts.empty()) throw UsageError("--targets needs at least one lemma");
      const auto cands = flag_candidates(filtered(c, o_.filter), std::set<std::string>(parts.begin(), parts.end()),
                                         pack, Scope::parse(scope));
      write_candidates_csv(sink(), cands);
      if (!matrix_out.empty()) {
        if (!model) throw UsageError("--matrix-out needs --model");
        std::ofstream mout(matrix_out, std::ios::binary);
        if (!mout) throw Error(Errc::IoError, fmt::format("cannot write {}", matrix_out));
        mout << to_json(topic_domain_matrix(cands, *model, &pack)).dump(2) << "\n";
      }
      return 0;
    }

    if (*rep) {
      const fs::path corpus_path(o_.corpus);
      const auto c = filtered(open_corpus(corpus_path, o_.metadata), o_.filter);
      const auto model = load_model(model_path);
      ReportOptions opts;
      opts.sketch_lemmas = sketch_lemmas;
      opts.min_score = report_min_score;
      opts.top_words = top_n;
      opts.svg = svg;
      RunManifest manifest;
      manifest.command = "report";
      manifest.parameters = {{"filter", o_.filter},
                             {"lemma", fmt::format("{}", fmt::join(sketch_lemmas, ","))},
                             {"min_score", fmt::format("{}", report_min_score)},
                             {"top_words", std::to_string(top_n)},
                             {"svg", svg ? "true" : "false"}};
      manifest.seeds = {model.config.seed};
      for (const auto& f : corpus_files(corpus_path)) manifest.add_input(f);
      if (!o_.metadata.empty()) manifest.add_input(o_.metadata);
      manifest.add_input(model_path);
      const auto written = emit_report(model, c, o_.out, opts, std::move(manifest));
      err_ << fmt::format("{} files -> {}\n", written.outputs.size() + 1, o_.out);
      return 0;
    }

    if (*srv) {
      ServiceState state;
      state.corpus = open_corpus(o_.corpus, o_.metadata);
      if (!model_path.empty()) state.model = load_model(model_path);
      if (!lexicon.empty()) state.lexicons = load_lexicons(lexicon);
      const auto parts = split_commas(targets);
      state.metaphor_targets = std::set<std::string>(parts.begin(), parts.end());
      state.cors_origin = cors;
      Server server(state);
      const int bound = server.bind(host, port);
      err_ << fmt::format("listening on http://{}:{}\n", host, bound) << std::flush;
      server.listen();
      return 0;
    }
  } catch (const UsageError& e) {
    err_ << "error: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    err_ << "error: " << to_string(e.code()) << ": " << e.what() << "\n";
    return exit_code(e.code());
  }
  return 1;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Runner r(out, err);
  return r.run(argc, argv);
}

}  // namespace lexis::cli
