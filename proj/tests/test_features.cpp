#include <doctest.h>

#include "test_support.hpp"

using namespace focale;

namespace {

bool has(const FeatureVector& fv, std::string_view canonical) {
  return fv.active.count(FeatureId::parse(canonical)) > 0;
}

FeatureVector extract(const Document& doc, std::size_t si,
                      const AnnotatedSpan& span, std::size_t radius = 5) {
  const TagContext ctx = testing::context(radius);
  return extract_features(doc, si, span, ctx.window, *ctx.lex, ctx.patterns);
}

}  // namespace

TEST_CASE("subject of a communication verb yields governance features") {
  auto doc = testing::doc_from_text("d", "la France a signé un accord .");
  testing::add_span(doc, 0, 1, 1, "gsp", "org");
  const FeatureVector fv = extract(doc, 0, doc.sentences[0].spans[0]);
  CHECK(has(fv, "VCLASS_GOV:communication"));
  CHECK(has(fv, "SUBJ_OF_HUMAN_VERB"));
  CHECK(has(fv, "LEMMA:signer:right"));
  CHECK(has(fv, "POS:DET:left"));
  CHECK(has(fv, "CLUST:communication"));
  CHECK(fv.gold_subtype == "org");
  CHECK(fv.main_type == "gsp");
}

TEST_CASE("locative preposition trigger lands in the left bucket") {
  auto doc = testing::doc_from_text("d", "ils se sont retrouvés en France .");
  testing::add_span(doc, 0, 5, 5, "gsp", "loc");
  const FeatureVector fv = extract(doc, 0, doc.sentences[0].spans[0]);
  CHECK(has(fv, "TRIG:loc_prep:left"));
  CHECK(!has(fv, "VCLASS_GOV:communication"));
  CHECK(!has(fv, "SUBJ_OF_HUMAN_VERB"));
}

TEST_CASE("finer-granularity co-occurrence") {
  auto doc = testing::doc_from_text("d", "Paris , France");
  testing::add_span(doc, 0, 2, 2, "gsp", "loc");
  const FeatureVector fv = extract(doc, 0, doc.sentences[0].spans[0]);
  CHECK(has(fv, "FINER_LOC_COOC"));

  // the reverse direction must not fire: country near a town span
  auto doc2 = testing::doc_from_text("d", "Paris , France");
  testing::add_span(doc2, 0, 0, 0, "loc");
  const FeatureVector fv2 = extract(doc2, 0, doc2.sentences[0].spans[0]);
  CHECK(!has(fv2, "FINER_LOC_COOC"));
}

TEST_CASE("feeling noun phrase in window") {
  auto doc = testing::doc_from_text("d", "l' amitié entre elles et France .");
  testing::add_span(doc, 0, 5, 5, "gsp", "pers");
  const FeatureVector fv = extract(doc, 0, doc.sentences[0].spans[0]);
  CHECK(has(fv, "FEELING_NP"));
  CHECK(has(fv, "CLUST:feeling"));
}

TEST_CASE("co-occurring entity spans contribute their main type") {
  auto doc = testing::doc_from_text("d", "France et Irlande parlent .");
  testing::add_span(doc, 0, 0, 0, "gsp", "org");
  testing::add_span(doc, 0, 2, 2, "gsp", "org");
  const FeatureVector fv = extract(doc, 0, doc.sentences[0].spans[0]);
  CHECK(has(fv, "COOC_NE:gsp"));
}

TEST_CASE("window radius clips token features") {
  auto doc = testing::doc_from_text(
      "d", "loin très loin accord France accord proche .");
  testing::add_span(doc, 0, 4, 4, "gsp", "loc");
  const FeatureVector fv = extract(doc, 0, doc.sentences[0].spans[0], 1);
  CHECK(has(fv, "LEMMA:accord:left"));
  CHECK(has(fv, "LEMMA:accord:right"));
  CHECK(!has(fv, "LEMMA:loin:left"));
}

TEST_CASE("sentence_bounded=false reaches the neighbor sentence") {
  auto doc = testing::doc_from_text("d", "Un accord existe . France parle .");
  REQUIRE(doc.sentences.size() == 2);
  testing::add_span(doc, 1, 0, 0, "gsp", "loc");
  TagContext ctx = testing::context(5, false);
  const FeatureVector unbounded = extract_features(
      doc, 1, doc.sentences[1].spans[0], ctx.window, *ctx.lex, ctx.patterns);
  CHECK(unbounded.active.count(FeatureId::parse("LEMMA:accord:left")) > 0);

  const FeatureVector bounded = extract(doc, 1, doc.sentences[1].spans[0]);
  CHECK(bounded.active.count(FeatureId::parse("LEMMA:accord:left")) == 0);
}

TEST_CASE("span out of range") {
  auto doc = testing::doc_from_text("d", "France .");
  AnnotatedSpan bad;
  bad.first_token = 5;
  bad.last_token = 7;
  bad.main_type = "gsp";
  CHECK_THROWS_WITH_AS(extract(doc, 0, bad),
                       doctest::Contains("SpanOutOfRange"), DomainError);
}

TEST_CASE("locality: tokens outside the window never matter") {
  testing::RandomDocGen gen(4242);
  std::mt19937_64& rng = gen.rng();
  int checked = 0;
  for (int trial = 0; trial < 120 && checked < 60; ++trial) {
    Document doc = gen.next("d");
    const std::size_t radius = 1 + rng() % 3;
    for (std::size_t si = 0; si < doc.sentences.size(); ++si) {
      if (doc.sentences[si].spans.empty()) continue;
      const AnnotatedSpan span = doc.sentences[si].spans[0];
      const std::size_t w_lo =
          span.first_token >= radius ? span.first_token - radius : 0;
      const std::size_t w_hi = std::min(
          span.last_token + radius, doc.sentences[si].tokens.size() - 1);
      std::vector<std::size_t> outside;
      for (std::size_t t = 0; t < doc.sentences[si].tokens.size(); ++t)
        if (t < w_lo || t > w_hi) outside.push_back(t);
      if (outside.empty()) continue;

      const FeatureVector before =
          extract(doc, si, span, radius);
      const std::size_t victim = outside[rng() % outside.size()];
      doc.sentences[si].tokens[victim].surface = gen.word();
      const FeatureVector after = extract(doc, si, span, radius);
      CHECK(before.active == after.active);
      ++checked;
    }
  }
  CHECK(checked >= 40);
}

TEST_CASE("extract_features is pure") {
  auto doc = testing::doc_from_text("d", "la France a signé un accord .");
  testing::add_span(doc, 0, 1, 1, "gsp", "org");
  const FeatureVector a = extract(doc, 0, doc.sentences[0].spans[0]);
  const FeatureVector b = extract(doc, 0, doc.sentences[0].spans[0]);
  CHECK(a.active == b.active);
}

TEST_CASE("feature id canonical text round-trips") {
  const std::vector<std::string> cases = {
      "TRIG:loc_prep:left", "POS:VERB:right",   "LEMMA:accord:left",
      "CLUST:communication", "VCLASS_GOV:volition", "SUBJ_OF_HUMAN_VERB",
      "COOC_NE:gsp",         "FINER_LOC_COOC",     "FEELING_NP"};
  for (const std::string& c : cases)
    CHECK(FeatureId::parse(c).to_string() == c);
  CHECK_THROWS_AS(FeatureId::parse("NOPE:x"), Error);
}

TEST_CASE("build_vocabulary stable and bijective") {
  FeatureVector a, b;
  a.active.insert(FeatureId::parse("LEMMA:accord:left"));
  a.active.insert(FeatureId::parse("TRIG:loc_prep:left"));
  b.active.insert(FeatureId::parse("LEMMA:accord:left"));
  b.active.insert(FeatureId::parse("CLUST:feeling"));
  const std::vector<FeatureVector> vecs = {a, b};
  const Vocabulary vocab = build_vocabulary(vecs);
  CHECK(vocab.size() == 3);
  CHECK(vocab.features[0].to_string() == "CLUST:feeling");  // kind order
  for (std::size_t i = 0; i < vocab.size(); ++i)
    CHECK(vocab.index_of.at(vocab.features[i]) == i);

  const Vocabulary again = build_vocabulary(vecs);
  CHECK(again.features == vocab.features);
  CHECK(build_vocabulary({}).size() == 0);
}
