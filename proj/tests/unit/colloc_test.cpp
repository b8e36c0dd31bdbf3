#include <doctest.h>

#include <cmath>
#include <sstream>

#include "fixtures.hpp"
#include "lexis/colloc.hpp"
#include "lexis/display.hpp"
#include "lexis/error.hpp"

using namespace lexis;
using namespace lexis::testing;

namespace {

// Head noun with modifiers: (lemma, times modifying the head, extra standalone uses).
Corpus modifier_fixture(const std::string& head, std::size_t head_alone,
                        const std::vector<std::tuple<std::string, int, int>>& mods) {
  std::vector<std::vector<T>> sentences;
  for (const auto& [adj, paired, alone] : mods) {
    for (int i = 0; i < paired; ++i) {
      sentences.push_back({{head, Upos::NOUN, 0, "root"}, {adj, Upos::ADJ, 1, "amod"}});
    }
    for (int i = 0; i < alone; ++i) sentences.push_back({{adj, Upos::ADJ, 0, "root"}});
  }
  for (std::size_t i = 0; i < head_alone; ++i) sentences.push_back({{head, Upos::NOUN, 0, "root"}});
  std::vector<Document> docs;
  docs.push_back(make_doc("phase1_week1_march_01", sentences));
  return Corpus::from_documents(std::move(docs));
}

}  // namespace

TEST_SUITE("freq") {
  TEST_CASE("pmw anchors from back-solved subcorpus sizes") {
    const auto a = freq(sized_corpus(232532, 81, "tsunami"), "tsunami");
    CHECK(a.hits == 81);
    CHECK(fixed2(a.pmw) == "348.34");
    const auto b = freq(sized_corpus(190219, 83, "tsunami"), "tsunami");
    CHECK(b.hits == 83);
    CHECK(fixed2(b.pmw) == "436.34");
  }

  TEST_CASE("absent lemma and empty view") {
    const auto c = sized_corpus(10, 2, "x");
    const auto r = freq(c, "zzz");
    CHECK(r.hits == 0);
    CHECK(r.pmw == 0.0);
    CHECK_THROWS_AS(freq(Corpus{}, "x"), Error);
  }

  TEST_CASE("hits are additive over a partition") {
    const auto c = random_tagged_corpus(5, 80);
    const auto f = SubcorpusFilter::parse("phase=1");
    for (const char* lemma : {"economia", "crisi", "il", "zzz"}) {
      CHECK(freq(c.subcorpus(f), lemma).hits + freq(c.subcorpus(f.complement()), lemma).hits ==
            freq(c, lemma).hits);
    }
  }

  TEST_CASE("display rounding is half-up and sign-symmetric") {
    CHECK(fixed2(2.675) == "2.68");
    CHECK(fixed2(-2.675) == "-2.68");
    CHECK(fixed2(1.004999) == "1.00");
    CHECK(fixed2(-0.001) == "0.00");
  }
}

TEST_SUITE("logdice") {
  TEST_CASE("hand values") {
    CHECK(logdice(5, 5, 5) == 14.0);
    CHECK(logdice(10, 6, 4) == 13.0);
    CHECK(logdice(1000, 1000, 1) == doctest::Approx(14.0 + std::log2(0.001)).epsilon(1e-12));
    CHECK(logdice(1000, 1000, 1) == doctest::Approx(4.034215715).epsilon(1e-9));
  }

  TEST_CASE("invalid counts") {
    CHECK_THROWS_AS(logdice(5, 5, 0), Error);
    CHECK_THROWS_AS(logdice(3, 5, 4), Error);
    CHECK_THROWS_AS(logdice(5, 3, 4), Error);
  }

  TEST_CASE("bounded by 14, monotone in f_pair, scale invariant") {
    std::mt19937 rng(1);
    for (int i = 0; i < 2000; ++i) {
      const std::size_t fh = 1 + rng() % 500;
      const std::size_t fc = 1 + rng() % 500;
      const std::size_t fp = 1 + rng() % std::min(fh, fc);
      const double v = logdice(fh, fc, fp);
      CHECK(v <= 14.0);
      if (fp < std::min(fh, fc)) CHECK(logdice(fh, fc, fp + 1) > v);
      const std::size_t k = 1 + rng() % 9;
      CHECK(logdice(fh * k, fc * k, fp * k) == doctest::Approx(v).epsilon(1e-12));
    }
  }
}

TEST_SUITE("collocations") {
  TEST_CASE("modifiers of economia, hand counted") {
    // economia: 4 tokens; italiano: 3 (all modifying); malato: 1.
    const auto c = modifier_fixture("economia", 0, {{"italiano", 3, 0}, {"malato", 1, 0}});
    const auto rows = collocations(c, "economia", RelationKind::Modifier);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].collocate == "italiano");
    CHECK(rows[0].f_head == 4);
    CHECK(rows[0].f_coll == 3);
    CHECK(rows[0].f_pair == 3);
    CHECK(rows[0].logdice == doctest::Approx(13.777608).epsilon(1e-6));  // 14 + log2(6/7)
    CHECK(rows[1].collocate == "malato");
    CHECK(rows[1].logdice == doctest::Approx(12.678072).epsilon(1e-6));  // 14 + log2(2/5)
  }

  TEST_CASE("absent head gives an empty list") {
    const auto c = modifier_fixture("economia", 0, {{"italiano", 1, 0}});
    CHECK(collocations(c, "zzz", RelationKind::Modifier).empty());
  }

  TEST_CASE("dependency relation on an untagged corpus") {
    std::vector<Document> docs;
    docs.push_back(plain_doc("phase1_week1_march_01", {"la crisi economica"}));
    const auto c = Corpus::from_documents(std::move(docs));
    try {
      collocations(c, "crisi", RelationKind::Modifier);
      FAIL("expected RelationsUnavailable");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::RelationsUnavailable);
    }
    CHECK_FALSE(collocations(c, "crisi", RelationKind::Window).empty());
  }

  TEST_CASE("subject-of and object-of take the verb governor") {
    std::vector<Document> docs;
    docs.push_back(make_doc("phase1_week1_march_01",
                            {{{"economia", Upos::NOUN, 2, "nsubj"}, {"subire", Upos::VERB, 0, "root"},
                              {"danno", Upos::NOUN, 2, "obj"}},
                             {{"ibernare", Upos::VERB, 0, "root"}, {"economia", Upos::NOUN, 1, "obj"}},
                             {{"economia", Upos::NOUN, 2, "nsubj:pass"}, {"salvare", Upos::VERB, 0, "root"}},
                             {{"economia", Upos::NOUN, 2, "nsubj"}, {"crollo", Upos::NOUN, 0, "root"}}}));
    const auto c = Corpus::from_documents(std::move(docs));
    const auto subj = collocations(c, "economia", RelationKind::SubjectOf);
    REQUIRE(subj.size() == 1);
    CHECK(subj[0].collocate == "subire");
    const auto obj = collocations(c, "economia", RelationKind::ObjectOf);
    REQUIRE(obj.size() == 1);
    CHECK(obj[0].collocate == "ibernare");
  }

  TEST_CASE("window scores are symmetric") {
    const auto c = random_tagged_corpus(9, 60);
    const auto opts = default_relation_options();
    for (const std::string x : {"economia", "crisi", "motore"}) {
      for (const auto& row : collocations(c, x, RelationKind::Window, 1, opts)) {
        const auto back = collocations(c, row.collocate, RelationKind::Window, 1, opts);
        const auto it = std::find_if(back.begin(), back.end(),
                                     [&](const Collocation& b) { return b.collocate == x; });
        REQUIRE(it != back.end());
        CHECK(it->f_pair == row.f_pair);
        CHECK(it->logdice == doctest::Approx(row.logdice).epsilon(1e-12));
      }
    }
  }

  TEST_CASE("window and dependency counts match brute-force oracles") {
    for (unsigned seed = 1; seed <= 6; ++seed) {
      const auto c = random_tagged_corpus(seed, 120);
      REQUIRE(c.token_count() <= 10000);
      auto opts = default_relation_options();
      opts.window_span = 1 + static_cast<int>(seed % 5);
      for (const std::string head : {"economia", "crisi", "tsunami", "motore", "virus"}) {
        const auto expected = brute_window(c, head, opts.window_span, opts.stoplist);
        const auto got = collocations(c, head, RelationKind::Window, 1, opts);
        CHECK(got.size() == expected.size());
        for (const auto& row : got) {
          REQUIRE(expected.contains(row.collocate));
          const auto& e = expected.at(row.collocate);
          CHECK(row.f_pair == e.f_pair);
          CHECK(row.f_head == e.f_head);
          CHECK(row.f_coll == e.f_coll);
        }
        for (const auto& [rel, kind] :
             {std::pair{"modifier", RelationKind::Modifier}, {"subject-of", RelationKind::SubjectOf},
              {"object-of", RelationKind::ObjectOf}}) {
          const auto dep_expected = brute_dependency(c, head, rel);
          const auto dep = collocations(c, head, kind, 1, opts);
          CHECK(dep.size() == dep_expected.size());
          for (const auto& row : dep) {
            REQUIRE(dep_expected.contains(row.collocate));
            CHECK(row.f_pair == dep_expected.at(row.collocate).f_pair);
            CHECK(row.f_coll == dep_expected.at(row.collocate).f_coll);
          }
        }
      }
    }
  }

  TEST_CASE("ordering and min_pair") {
    const auto c = modifier_fixture("crisi", 0, {{"a", 2, 0}, {"b", 2, 0}, {"c", 1, 0}});
    const auto rows = collocations(c, "crisi", RelationKind::Modifier);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].collocate == "a");  // tie with b on score and f_pair: lexicographic
    CHECK(rows[1].collocate == "b");
    CHECK(collocations(c, "crisi", RelationKind::Modifier, 2).size() == 2);
  }
}

TEST_SUITE("word_sketch") {
  TEST_CASE("twelve modifiers are truncated to ten") {
    std::vector<std::tuple<std::string, int, int>> mods;
    for (int i = 0; i < 12; ++i) mods.emplace_back("agg" + std::to_string(i), 1, 0);
    const auto c = modifier_fixture("crisi", 0, mods);
    const auto sketch = word_sketch(c, "crisi");
    REQUIRE(sketch.relations.size() == 3);
    CHECK(sketch.relations[0].relation == RelationKind::Modifier);
    CHECK(sketch.relations[0].items.size() == 10);
    CHECK(sketch.relations[1].items.empty());
  }

  TEST_CASE("min score keeps only scores >= 9") {
    // head: 8 paired + 8 alone = 16 tokens.
    // A: 8 paired          -> 14 + log2(16/24)  = 13.415
    // B: 1 paired, 15 more -> 14 + log2(2/32)   = 10
    // C: 1 paired, 47 more -> 14 + log2(2/64)   = 9
    // D: 1 paired, 111 more-> 14 + log2(2/128)  = 8
    // head count: 8 + 1 + 1 + 1 paired, so 5 alone to reach 16.
    const auto c = modifier_fixture("economia", 5,
                                    {{"a", 8, 0}, {"b", 1, 15}, {"c", 1, 47}, {"d", 1, 111}});
    REQUIRE(c.lemma_frequency("economia") == 16);
    const auto all = word_sketch(c, "economia");
    REQUIRE(all.relations[0].items.size() == 4);
    CHECK(all.relations[0].items[1].logdice == doctest::Approx(10.0));
    CHECK(all.relations[0].items[2].logdice == doctest::Approx(9.0));
    CHECK(all.relations[0].items[3].logdice == doctest::Approx(8.0));
    const auto cut = word_sketch(c, "economia", 10, 9.0);
    const auto& items = cut.relations[0].items;
    REQUIRE(items.size() == 3);
    for (const auto& i : items) CHECK(i.logdice >= 9.0);
    CHECK(items.back().collocate == "c");

    const auto graph = sketch_graph(all, 9.0);
    CHECK(graph["relations"][0]["nodes"].size() == 3);
    for (const auto& node : graph["relations"][0]["nodes"]) CHECK(node["logdice"].get<double>() >= 9.0);
  }

  TEST_CASE("deterministic") {
    const auto c = random_tagged_corpus(21, 90);
    CHECK(to_json(word_sketch(c, "economia")).dump() == to_json(word_sketch(c, "economia")).dump());
  }

  TEST_CASE("csv export") {
    const auto c = modifier_fixture("economia", 0, {{"italiano", 3, 0}});
    std::ostringstream out;
    write_collocations_csv(out, collocations(c, "economia", RelationKind::Modifier));
    CHECK(out.str() ==
          "head,relation,collocate,f_head,f_coll,f_pair,logdice\n"
          "economia,modifier,italiano,3,3,3,14.00\n");
  }
}

TEST_SUITE("sketch_diff") {
  Corpus tsunami_phases() {
    std::vector<Document> docs;
    std::vector<std::vector<T>> p1, p2;
    for (int i = 0; i < 11; ++i)
      p1.push_back({{"tsunami", Upos::NOUN, 0, "root"}, {"continuo", Upos::ADJ, 1, "amod"}});
    for (int i = 0; i < 2; ++i)
      p1.push_back({{"tsunami", Upos::NOUN, 0, "root"}, {"epidemico", Upos::ADJ, 1, "amod"}});
    for (int i = 0; i < 6; ++i)
      p2.push_back({{"tsunami", Upos::NOUN, 0, "root"}, {"economico", Upos::ADJ, 1, "amod"}});
    for (int i = 0; i < 2; ++i)
      p2.push_back({{"tsunami", Upos::NOUN, 0, "root"}, {"finanziario", Upos::ADJ, 1, "amod"}});
    p1.push_back({{"tsunami", Upos::NOUN, 0, "root"}, {"grande", Upos::ADJ, 1, "amod"}});
    p2.push_back({{"tsunami", Upos::NOUN, 0, "root"}, {"grande", Upos::ADJ, 1, "amod"}});
    p2.push_back({{"grande", Upos::ADJ, 0, "root"}});
    docs.push_back(make_doc("phase1_week3_march_12", p1));
    docs.push_back(make_doc("phase2_week11_may_06", p2));
    return Corpus::from_documents(std::move(docs));
  }

  TEST_CASE("phase-specific modifiers of tsunami") {
    const auto c = tsunami_phases();
    const auto a = c.subcorpus(SubcorpusFilter().phase(1));
    const auto b = c.subcorpus(SubcorpusFilter().phase(2));
    const auto diff = sketch_diff(a, b, "tsunami");
    auto find = [&](const std::string& coll) {
      return *std::find_if(diff.begin(), diff.end(), [&](const SketchDiff& d) {
        return d.collocate == coll && d.relation == RelationKind::Modifier;
      });
    };
    CHECK(find("continuo").score_a);
    CHECK_FALSE(find("continuo").score_b);
    CHECK_FALSE(find("continuo").delta());
    CHECK_FALSE(find("economico").score_a);
    CHECK(find("economico").score_b);
    const auto grande = find("grande");
    REQUIRE(grande.delta());
    // A: f(tsunami)=14, f(grande)=1, pair 1; B: 9, 2, 1.
    CHECK(*grande.delta() == doctest::Approx(std::log2(2.0 / 15.0) - std::log2(2.0 / 11.0)));
  }

  TEST_CASE("identical views give zero deltas; swapping negates") {
    const auto c = random_tagged_corpus(4, 100);
    for (const auto& d : sketch_diff(c, c, "economia")) {
      REQUIRE(d.delta());
      CHECK(*d.delta() == 0.0);
    }
    const auto a = c.subcorpus(SubcorpusFilter().phase(1));
    const auto b = c.subcorpus(SubcorpusFilter().phase(2));
    const auto ab = sketch_diff(a, b, "economia");
    const auto ba = sketch_diff(b, a, "economia");
    REQUIRE(ab.size() == ba.size());
    for (std::size_t i = 0; i < ab.size(); ++i) {
      CHECK(ab[i].collocate == ba[i].collocate);
      CHECK(ab[i].score_a == ba[i].score_b);
      CHECK(ab[i].score_b == ba[i].score_a);
      if (ab[i].delta()) CHECK(*ab[i].delta() == -*ba[i].delta());
    }
    const auto ja = to_json(ab);
    const auto jb = to_json(ba);
    for (std::size_t i = 0; i < ab.size(); ++i) {
      if (!ja[i]["delta"].is_null()) {
        CHECK(ja[i]["delta"].get<double>() == -jb[i]["delta"].get<double>());
      }
    }
  }

  TEST_CASE("empty subcorpus") {
    const auto c = tsunami_phases();
    CHECK_THROWS_AS(sketch_diff(c, c.subcorpus(SubcorpusFilter().weeks(40, 41)), "tsunami"), Error);
  }
}
