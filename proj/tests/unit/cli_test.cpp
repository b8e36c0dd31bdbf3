#include <doctest.h>

#include <cstdlib>
#include <sstream>

#include "cli.hpp"
#include "fixtures.hpp"
#include "lexis/ingest.hpp"
#include "lexis/report.hpp"
#include "lexis/service.hpp"
#include "synthetic.hpp"
#include "temp_dir.hpp"

using namespace lexis;
using namespace lexis::testing;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run lexis_cmd(std::vector<std::string> args) {
  args.insert(args.begin(), "lexis");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) { return read_file(p); }

const std::filesystem::path& pmw_file() {
  static TempDir dir;
  static const auto path = [] {
    auto p = dir.path() / "pmw.json";
    save_corpus(pmw_fixture(), p);
    return p;
  }();
  return path;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("freq prints hits and pmw") {
    const auto r = lexis_cmd({"freq", "--corpus", pmw_file().string(), "--lemma", "tsunami", "--filter", "phase=1"});
    CHECK(r.code == 0);
    CHECK(r.out == "81 348.34\n");
    const auto r2 = lexis_cmd({"freq", "--corpus", pmw_file().string(), "--lemma", "tsunami", "--filter", "phase=2"});
    CHECK(r2.out == "83 436.34\n");
  }

  TEST_CASE("json output is the service body") {
    const auto r = lexis_cmd(
        {"freq", "--corpus", pmw_file().string(), "--lemma", "tsunami", "--filter", "phase=1", "--json"});
    CHECK(r.code == 0);
    ServiceState s;
    s.corpus = load_corpus(pmw_file());
    CHECK(r.out == handle(s, "/freq", {{"lemma", "tsunami"}, {"filter", "phase=1"}}).body + "\n");
    const auto k = lexis_cmd({"kwic", "--corpus", pmw_file().string(), "--q", "zzz", "--json"});
    CHECK(k.out == "{\"total\":0,\"lines\":[]}\n");
  }

  TEST_CASE("exit codes") {
    CHECK(lexis_cmd({"bogus"}).code == 1);
    CHECK(lexis_cmd({}).code == 1);
    CHECK(lexis_cmd({"freq"}).code == 1);
    CHECK(lexis_cmd({"freq", "--lemma", "x", "--corpus", pmw_file().string(), "--filter", "mood=sad"}).code == 1);
    CHECK(lexis_cmd({"kwic", "--q", "[lemma=", "--corpus", pmw_file().string()}).code == 1);
    CHECK(lexis_cmd({"--help"}).code == 0);
    const auto missing = lexis_cmd({"freq", "--lemma", "x", "--corpus", "/nonexistent/corpus.json"});
    CHECK(missing.code == 2);
    CHECK(missing.err.find("IoError") != std::string::npos);
    CHECK(lexis_cmd({"freq", "--lemma", "x", "--corpus", pmw_file().string(), "--filter", "week=5"}).code == 2);
    CHECK(lexis_cmd({"sketch", "--lemma", "tsunami", "--relation", "modifier", "--corpus", pmw_file().string()}).code ==
          2);
    CHECK(lexis_cmd({"effects", "--model", "/nonexistent/model.json", "--corpus", pmw_file().string()}).code == 2);
  }

  TEST_CASE("corpus from the environment") {
    setenv("LEXIS_CORPUS", pmw_file().c_str(), 1);
    const auto r = lexis_cmd({"freq", "--lemma", "tsunami"});
    unsetenv("LEXIS_CORPUS");
    CHECK(r.code == 0);
    CHECK(r.out == "164 387.94\n");
  }

  TEST_CASE("options from a config file") {
    TempDir tmp;
    const auto cfg = tmp.write("lexis.ini", "[freq]\nlemma = tsunami\nfilter = phase=2\ncorpus = " +
                                                pmw_file().string() + "\n");
    const auto r = lexis_cmd({"--config", cfg.string(), "freq"});
    CHECK(r.code == 0);
    CHECK(r.out == "83 436.34\n");
    const auto over = lexis_cmd({"--config", cfg.string(), "freq", "--filter", "phase=1"});
    CHECK(over.out == "81 348.34\n");
  }

  TEST_CASE("ingest and kwic over CoNLL-U") {
    TempDir tmp;
    const auto out = tmp.path() / "crisi.json";
    const auto r = lexis_cmd({"ingest", LEXIS_TEST_DATA_DIR "/la_crisi.conllu", "--out", out.string()});
    REQUIRE(r.code == 0);
    const auto k = lexis_cmd({"kwic", "--corpus", out.string(), "--q", "tsunami"});
    CHECK(k.code == 0);
    CHECK(k.out.starts_with("doc_id\tleft\tnode\tright\n"));
    const auto p = lexis_cmd({"pattern", "--corpus", out.string(), "--y", "tsunami"});
    CHECK(p.out == "crisi\t1\n");
  }

  TEST_CASE("fit twice gives identical model files") {
    TempDir tmp;
    SyntheticSpec spec;
    spec.docs = 40;
    spec.doc_length = 30;
    const auto corpus = tmp.path() / "syn.json";
    save_corpus(generate_lda(5, spec).corpus, corpus);
    const auto a = tmp.path() / "a.json";
    const auto b = tmp.path() / "b.json";
    for (const auto& out : {a, b}) {
      const auto r = lexis_cmd({"fit", "--corpus", corpus.string(), "--k", "3", "--seed", "42", "--iterations", "100",
                                "--burnin", "50", "--thin", "10", "--out", out.string()});
      REQUIRE(r.code == 0);
    }
    CHECK(slurp(a) == slurp(b));
    const auto c = tmp.path() / "c.json";
    REQUIRE(lexis_cmd({"fit", "--corpus", corpus.string(), "--k", "3", "--seed", "43", "--iterations", "100",
                       "--burnin", "50", "--thin", "10", "--out", c.string()})
                .code == 0);
    CHECK(slurp(a) != slurp(c));
    CHECK(lexis_cmd({"fit", "--corpus", corpus.string(), "--k", "0", "--out", c.string()}).code == 1);
    CHECK(lexis_cmd({"fit", "--corpus", corpus.string(), "--k", "2", "--labels", "a,b,c", "--iterations", "20",
                     "--burnin", "10", "--out", c.string()})
              .code == 1);

    SUBCASE("effects, prevalence and report use the model") {
      const auto e = lexis_cmd({"effects", "--corpus", corpus.string(), "--model", a.string()});
      CHECK(e.code == 0);
      CHECK(e.out.starts_with("topic,term,coef,se,p\n"));
      const auto p = lexis_cmd({"prevalence", "--corpus", corpus.string(), "--model", a.string(), "--by", "week"});
      CHECK(p.code == 0);
      CHECK(p.out.starts_with("week,documents,topic,mean,lower,upper\n"));
      setenv("SOURCE_DATE_EPOCH", "1586995200", 1);
      const auto r1 = lexis_cmd({"report", "--corpus", corpus.string(), "--model", a.string(), "--out",
                                 (tmp.path() / "run1").string(), "--svg"});
      const auto r2 = lexis_cmd({"report", "--corpus", corpus.string(), "--model", a.string(), "--out",
                                 (tmp.path() / "run2").string(), "--svg"});
      unsetenv("SOURCE_DATE_EPOCH");
      REQUIRE(r1.code == 0);
      REQUIRE(r2.code == 0);
      for (const auto& f : std::filesystem::directory_iterator(tmp.path() / "run1")) {
        const auto name = f.path().filename();
        CHECK_MESSAGE(slurp(f.path()) == slurp(tmp.path() / "run2" / name), name.string());
      }
      const auto manifest = nlohmann::json::parse(slurp(tmp.path() / "run1" / "manifest.json"));
      CHECK(manifest["seeds"][0] == 42);
      CHECK(manifest["inputs"].size() == 2);
      CHECK(manifest["inputs"][0]["sha256"] == sha256_file(corpus));
    }
  }

  TEST_CASE("metaphor candidates as CSV") {
    TempDir tmp;
    std::vector<Document> docs;
    docs.push_back(plain_doc("phase1_week2_march_10", {"la burodemia ferma le imprese , motore della ricerca"}));
    const auto corpus = tmp.path() / "m.json";
    save_corpus(Corpus::from_documents(std::move(docs)), corpus);
    const auto r = lexis_cmd({"metaphors", "--corpus", corpus.string(), "--targets", "imprese"});
    CHECK(r.code == 0);
    CHECK(r.out == "doc,sent,target,domain,trigger\nphase1_week2_march_10,0,imprese,MACHINE,motore\n");
    const auto lex = tmp.write("lex.json", R"({"A":["motore"],"B":["motore"]})");
    const auto bad = lexis_cmd({"metaphors", "--corpus", corpus.string(), "--lexicon", lex.string()});
    CHECK(bad.code == 2);
    CHECK(bad.err.find("OverlappingDomains") != std::string::npos);
  }

  TEST_CASE("searchk prints one row per candidate") {
    TempDir tmp;
    SyntheticSpec spec;
    spec.docs = 40;
    spec.doc_length = 30;
    const auto corpus = tmp.path() / "syn.json";
    save_corpus(generate_lda(6, spec).corpus, corpus);
    const auto r = lexis_cmd({"searchk", "--corpus", corpus.string(), "--k", "1,2", "--iterations", "60", "--burnin",
                              "30", "--thin", "10"});
    CHECK(r.code == 0);
    std::istringstream in(r.out);
    std::string line;
    int lines = 0;
    while (std::getline(in, line)) ++lines;
    CHECK(lines == 3);
  }
}
