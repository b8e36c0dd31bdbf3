#include <doctest.h>

#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "lexis/error.hpp"
#include "lexis/metaphor.hpp"
#include "temp_dir.hpp"

using namespace lexis;
using namespace lexis::testing;

namespace {

Corpus motore_fixture() {
  std::vector<Document> docs;
  docs.push_back(plain_doc("phase1_week2_march_10",
                           {"la burodemia ferma le imprese , motore della ricerca"}));
  return Corpus::from_documents(std::move(docs));
}

// Hand-rolled model over the given documents; theta rows supplied directly.
TopicModel hand_model(const Corpus& c, const std::vector<std::vector<double>>& theta) {
  TopicModel m;
  m.config.k = static_cast<int>(theta.front().size());
  m.theta = Matrix(theta.size(), theta.front().size());
  m.phi = Matrix(theta.front().size(), 0);
  for (std::size_t d = 0; d < c.size(); ++d) {
    m.documents.push_back(c.doc(d).id());
    m.document_lengths.push_back(c.doc(d).size());
    for (std::size_t k = 0; k < theta[d].size(); ++k) m.theta(d, k) = theta[d][k];
  }
  return m;
}

// All (target, trigger) pairs by a plain scan of each sentence.
std::size_t brute_pairs(const Corpus& c, const std::set<std::string>& targets,
                        const LexiconPack& pack, int window) {
  std::size_t n = 0;
  for (const auto& d : c.documents()) {
    for (const auto& sent : scan_sentences(*d)) {
      for (const auto& x : sent) {
        for (const auto& y : sent) {
          if (x.offset == y.offset || !targets.contains(x.lemma) || !pack.domain_of(y.lemma)) continue;
          if (window > 0 && std::abs(x.offset - y.offset) > window) continue;
          ++n;
        }
      }
    }
  }
  return n;
}

}  // namespace

TEST_SUITE("metaphor") {
  TEST_CASE("default pack") {
    const auto pack = default_lexicons();
    CHECK(pack.language() == "it");
    REQUIRE(pack.domains().size() == 4);
    CHECK(pack.domain_of("motore")->domain == "MACHINE");
    CHECK(pack.domain_of("tsunami")->domain == "NATURAL_DISASTER");
    CHECK(pack.domain_of("cicatrici")->domain == "LIVING_ORGANISM");
    CHECK(pack.domain_of("pilastri")->domain == "BUILDING");
    CHECK(pack.domain_of("guerra") == nullptr);
    for (const auto& d : pack.domains()) CHECK(d.domain != "WAR");
  }

  TEST_CASE("imprese, motore della ricerca") {
    const auto c = motore_fixture();
    const auto got = flag_candidates(c, {"impresa", "imprese"}, default_lexicons());
    REQUIRE(got.size() == 1);
    CHECK(got[0].target == "imprese");
    CHECK(got[0].domain == "MACHINE");
    CHECK(got[0].trigger == "motore");
    CHECK(got[0].sent == 0);
    CHECK(got[0].snippet == "burodemia ferma le imprese , motore della ricerca");
  }

  TEST_CASE("two targets and two triggers in one sentence give four candidates") {
    std::vector<Document> docs;
    docs.push_back(plain_doc("phase1_week1_march_02", {"economia tsunami società crollo"}));
    const auto c = Corpus::from_documents(std::move(docs));
    const auto got = flag_candidates(c, {"economia", "società"}, default_lexicons());
    REQUIRE(got.size() == 4);
    CHECK(got[0].target == "economia");
    CHECK(got[0].trigger == "tsunami");
    CHECK(got[1].target == "economia");
    CHECK(got[1].trigger == "crollo");
    CHECK(got[2].target == "società");
    CHECK(got[2].trigger == "tsunami");
    CHECK(got[3].target == "società");
    CHECK(got[3].trigger == "crollo");
  }

  TEST_CASE("targets and triggers in different sentences do not pair") {
    std::vector<Document> docs;
    docs.push_back(plain_doc("phase1_week1_march_02", {"economia forte", "un tsunami"}));
    const auto c = Corpus::from_documents(std::move(docs));
    CHECK(flag_candidates(c, {"economia"}, default_lexicons()).empty());
  }

  TEST_CASE("a token is never its own trigger") {
    std::vector<Document> docs;
    docs.push_back(plain_doc("phase1_week1_march_02", {"motore e motore"}));
    const auto c = Corpus::from_documents(std::move(docs));
    const auto got = flag_candidates(c, {"motore"}, default_lexicons());
    CHECK(got.size() == 2);
  }

  TEST_CASE("window scope is monotone and bounded by sentence scope") {
    const auto pack = default_lexicons();
    const std::set<std::string> targets = {"economia", "società", "virus"};
    for (unsigned seed : {1u, 2u, 3u}) {
      const auto c = random_tagged_corpus(seed, 40);
      std::size_t prev = 0;
      for (int n = 1; n <= 12; ++n) {
        const auto got = flag_candidates(c, targets, pack, Scope::window(n)).size();
        CHECK(got >= prev);
        CHECK(got == brute_pairs(c, targets, pack, n));
        prev = got;
      }
      const auto whole = flag_candidates(c, targets, pack).size();
      CHECK(whole >= prev);
      CHECK(whole == brute_pairs(c, targets, pack, 0));
    }
  }

  TEST_CASE("candidates are ordered by document, sentence and offset") {
    const auto c = random_tagged_corpus(8, 30);
    const auto got = flag_candidates(c, {"economia", "crisi"}, default_lexicons());
    REQUIRE(!got.empty());
    std::map<std::string, std::size_t> order;
    for (std::size_t d = 0; d < c.size(); ++d) order[c.doc(d).id().str()] = d;
    for (std::size_t i = 1; i < got.size(); ++i) {
      const auto a = std::tuple(order[got[i - 1].doc.str()], got[i - 1].sent, got[i - 1].target_offset,
                                got[i - 1].trigger_offset);
      const auto b = std::tuple(order[got[i].doc.str()], got[i].sent, got[i].target_offset,
                                got[i].trigger_offset);
      CHECK(a < b);
    }
  }

  TEST_CASE("scope parsing") {
    CHECK(Scope::parse("sentence").is_sentence());
    CHECK(Scope::parse("window:5").width() == 5);
    CHECK(Scope::parse("window(3)").width() == 3);
    CHECK(Scope::parse("window:4").str() == "window:4");
    for (const char* bad : {"window:0", "window:", "window:x", "para", "window(2"}) {
      CHECK_THROWS_AS((void)Scope::parse(bad), Error);
    }
  }

  TEST_CASE("lexicon files") {
    TempDir tmp;
    SUBCASE("plain and annotated domains") {
      const auto p = tmp.write("lex.json", R"({"language":"en","MACHINE":["Engine","fuel"],
        "BUILDING":{"lemmas":["pillar"],"in_metanet":true}})");
      const auto pack = load_lexicons(p);
      CHECK(pack.language() == "en");
      CHECK(pack.domain_of("engine")->domain == "MACHINE");
      REQUIRE(pack.domain_of("pillar")->in_metanet.has_value());
      CHECK(*pack.domain_of("pillar")->in_metanet);
      CHECK_FALSE(pack.domain_of("fuel")->in_metanet.has_value());
      CHECK(parse_lexicons(to_json(pack).dump()).domains().size() == 2);
    }
    SUBCASE("a lemma in two domains") {
      try {
        (void)parse_lexicons(R"({"A":["x","y"],"B":["y"]})");
        FAIL("expected an error");
      } catch (const Error& e) {
        CHECK(e.code() == Errc::OverlappingDomains);
      }
    }
    SUBCASE("malformed") {
      for (const char* bad : {"{", "[]", "{}", R"({"A":[]})", R"({"A":[1]})", R"({"A":"x"})",
                              R"({"A":{"in_metanet":true}})", R"({"A":{"lemmas":["x"],"in_metanet":1}})"}) {
        try {
          (void)parse_lexicons(bad);
          FAIL("expected an error for " << bad);
        } catch (const Error& e) {
          CHECK(e.code() == Errc::MalformedLexicon);
        }
      }
    }
    SUBCASE("missing file") {
      CHECK_THROWS_AS((void)load_lexicons(tmp.path() / "nope.json"), Error);
    }
  }

  TEST_CASE("matrix cells sum to the candidate count") {
    const auto pack = default_lexicons();
    const auto c = random_tagged_corpus(5, 50);
    std::mt19937 rng(5);
    std::vector<std::vector<double>> theta;
    for (std::size_t d = 0; d < c.size(); ++d) {
      std::vector<double> row = {double(rng() % 10), double(rng() % 10), double(rng() % 10)};
      theta.push_back(row);
    }
    const auto m = hand_model(c, theta);
    const auto cands = flag_candidates(c, {"economia", "crisi", "virus"}, pack);
    const auto mat = topic_domain_matrix(cands, m, &pack);
    CHECK(mat.total() == cands.size());
    CHECK(mat.domains.size() == 4);
    std::size_t tokens = 0;
    for (auto t : mat.topic_tokens) tokens += t;
    CHECK(tokens == c.token_count());
    for (std::size_t k = 0; k < 3; ++k) {
      for (std::size_t j = 0; j < 4; ++j) {
        if (mat.topic_tokens[k] == 0) continue;
        CHECK(mat.per_million[k][j] ==
              doctest::Approx(1e6 * double(mat.counts[k][j]) / double(mat.topic_tokens[k])));
      }
    }
  }

  TEST_CASE("ties in theta go to the lowest topic") {
    std::vector<Document> docs;
    docs.push_back(plain_doc("phase1_week1_march_02", {"economia motore"}));
    const auto c = Corpus::from_documents(std::move(docs));
    const auto m = hand_model(c, {{0.2, 0.4, 0.4}});
    const auto mat = topic_domain_matrix(flag_candidates(c, {"economia"}, default_lexicons()), m);
    REQUIRE(mat.domains == std::vector<std::string>{"MACHINE"});
    CHECK(mat.counts[0][0] == 0);
    CHECK(mat.counts[1][0] == 1);
    CHECK(mat.counts[2][0] == 0);
  }

  TEST_CASE("candidates from documents outside the model") {
    const auto c = motore_fixture();
    std::vector<Document> other;
    other.push_back(plain_doc("phase2_week9_may_01", {"niente"}));
    const auto oc = Corpus::from_documents(std::move(other));
    const auto m = hand_model(oc, {{1.0, 0.0}});
    const auto cands = flag_candidates(c, {"imprese"}, default_lexicons());
    try {
      (void)topic_domain_matrix(cands, m);
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::ModelCorpusMismatch);
    }
  }

  TEST_CASE("machine imagery planted in one fitted topic") {
    // Two disjoint vocabularies; only documents of the second carry motore.
    std::vector<Document> docs;
    std::mt19937 rng(4);
    for (int d = 0; d < 60; ++d) {
      const bool second = d % 2 == 1;
      std::vector<T> sentence;
      for (int i = 0; i < 30; ++i) {
        sentence.push_back({(second ? "b" : "a") + std::to_string(rng() % 8)});
      }
      sentence.push_back({"economia"});
      sentence.push_back({second ? "motore" : "crollo"});
      docs.push_back(make_doc(nth_id(d, 1 + d % 2, 1 + d % 5), {sentence}));
    }
    const auto c = Corpus::from_documents(std::move(docs));
    ModelConfig cfg;
    cfg.k = 2;
    cfg.iterations = 300;
    cfg.burnin = 150;
    cfg.thin = 25;
    cfg.seed = 2;
    const auto m = fit(c, cfg);
    const auto pack = default_lexicons();
    const auto mat = topic_domain_matrix(flag_candidates(c, {"economia"}, pack), m, &pack);
    const auto machine = 2u;  // column order follows the pack
    REQUIRE(mat.domains[machine] == "MACHINE");
    const std::size_t hot = mat.counts[0][machine] > 0 ? 0 : 1;
    CHECK(mat.counts[hot][machine] == 30);
    CHECK(mat.counts[1 - hot][machine] == 0);
    CHECK(mat.counts[1 - hot][0] == 30);
    CHECK(mat.counts[hot][0] == 0);
  }

  TEST_CASE("candidate CSV") {
    std::ostringstream out;
    write_candidates_csv(out, flag_candidates(motore_fixture(), {"imprese"}, default_lexicons()));
    CHECK(out.str() == "doc,sent,target,domain,trigger\n"
                       "phase1_week2_march_10,0,imprese,MACHINE,motore\n");
  }

  TEST_CASE("JSON shapes") {
    const auto c = motore_fixture();
    const auto cands = flag_candidates(c, {"imprese"}, default_lexicons());
    const auto j = to_json(std::span<const MetaphorCandidate>(cands));
    REQUIRE(j.size() == 1);
    CHECK(j[0]["domain"] == "MACHINE");
    const auto m = hand_model(c, {{0.9, 0.1}});
    const auto mj = to_json(topic_domain_matrix(cands, m));
    CHECK(mj["total"] == 1);
    CHECK(mj["rows"][0]["counts"][0] == 1);
  }
}
