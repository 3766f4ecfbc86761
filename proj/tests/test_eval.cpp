#include <doctest.h>

#include "test_support.hpp"

using namespace focale;

namespace {

Document gsp_doc(const std::string& id,
                 const std::vector<std::optional<std::string>>& subs) {
  // one sentence per span keeps the layout trivial
  std::string raw;
  for (std::size_t i = 0; i < subs.size(); ++i) {
    if (i > 0) raw += "\n";
    raw += "France parle .";
  }
  Document doc = testing::doc_from_text(id, raw);
  for (std::size_t i = 0; i < subs.size(); ++i)
    testing::add_span(doc, i, 0, 0, "gsp", subs[i]);
  return doc;
}

Corpus one_doc(const Document& d) {
  Corpus c{{d}, testing::schema()};
  return c;
}

}  // namespace

TEST_CASE("align_slots statuses") {
  const Document ref = gsp_doc("d", {"loc", "org", "loc"});
  SUBCASE("identical documents are all correct") {
    const auto matches = align_slots(ref, ref);
    REQUIRE(matches.size() == 3);
    for (const SlotMatch& m : matches)
      CHECK(m.status == MatchStatus::Correct);
  }
  SUBCASE("missing hypothesis span is a deletion") {
    Document hyp = ref;
    hyp.sentences[1].spans.clear();
    const auto matches = align_slots(ref, hyp);
    std::size_t deletions = 0;
    for (const SlotMatch& m : matches)
      if (m.status == MatchStatus::Deletion) ++deletions;
    CHECK(deletions == 1);
  }
  SUBCASE("same boundaries, different subtype is a substitution") {
    Document hyp = ref;
    hyp.sentences[1].spans[0].sub_type = "loc";
    const auto matches = align_slots(ref, hyp);
    std::size_t subst = 0;
    for (const SlotMatch& m : matches)
      if (m.status == MatchStatus::TypeSubstitution) ++subst;
    CHECK(subst == 1);
  }
  SUBCASE("main-type clash counts deletion plus insertion") {
    Document hyp = ref;
    hyp.sentences[0].spans[0].main_type = "loc";
    hyp.sentences[0].spans[0].sub_type.reset();
    const auto matches = align_slots(ref, hyp);
    CHECK(matches.size() == 4);
  }
  SUBCASE("token mismatch is rejected") {
    Document other = testing::doc_from_text("d", "Irlande parle .");
    CHECK_THROWS_WITH_AS(align_slots(ref, other),
                         doctest::Contains("TokenMismatch"), Error);
  }
}

TEST_CASE("slot_error_rate formula") {
  const Document ref = gsp_doc("d", {"loc", "org", "loc", "org"});
  SUBCASE("one deletion plus one substitution over four slots") {
    Document hyp = ref;
    hyp.sentences[0].spans.clear();               // deletion
    hyp.sentences[1].spans[0].sub_type = "loc";   // substitution
    CHECK(slot_error_rate(align_slots(ref, hyp)) == doctest::Approx(0.5));
  }
  SUBCASE("perfect hypothesis") {
    CHECK(slot_error_rate(align_slots(ref, ref)) == 0.0);
  }
  SUBCASE("insertion-only errors") {
    Document hyp = ref;
    AnnotatedSpan extra;
    extra.first_token = 1;
    extra.last_token = 1;
    extra.main_type = "pers";
    hyp.sentences[0].spans.push_back(extra);
    CHECK(slot_error_rate(align_slots(ref, hyp)) == doctest::Approx(0.25));
  }
  SUBCASE("no reference slots") {
    const Document empty = testing::doc_from_text("d", "rien .");
    CHECK_THROWS_WITH_AS(slot_error_rate(align_slots(empty, empty)),
                         doctest::Contains("EmptyReference"), Error);
  }
}

TEST_CASE("score_prf on constructed counts") {
  // 12 ref spans of gsp.org, 10 hypothesized, 8 correct
  std::vector<std::optional<std::string>> ref_subs(12, std::string("org"));
  const Document ref = gsp_doc("d", ref_subs);
  Document hyp = ref;
  for (int i = 8; i < 12; ++i) hyp.sentences[i].spans[0].sub_type = "loc";
  // two spurious org spans elsewhere
  for (int i = 8; i < 10; ++i) {
    AnnotatedSpan extra;
    extra.first_token = 1;
    extra.last_token = 1;
    extra.main_type = "gsp";
    extra.sub_type = "org";
    hyp.sentences[i].spans.push_back(extra);
  }
  const auto matches = align_slots(ref, hyp);
  const PrfRow row = score_prf(matches, "gsp.org");
  CHECK(row.ref_count == 12);
  CHECK(row.precision == doctest::Approx(0.8));
  CHECK(row.recall == doctest::Approx(0.6667).epsilon(1e-3));
  CHECK(row.f_measure == doctest::Approx(0.7273).epsilon(1e-3));
  CHECK(!row.undefined);

  const PrfRow absent = score_prf(matches, "gsp.hum");
  CHECK(absent.ref_count == 0);
  CHECK(absent.precision == 0.0);
  CHECK(absent.recall == 0.0);
  CHECK(absent.undefined);
}

TEST_CASE("f_measure matches the published row") {
  CHECK(f_measure(0.84, 0.82) == doctest::Approx(0.8299).epsilon(5e-5));
  CHECK(f_measure(0.0, 0.0) == 0.0);
}

TEST_CASE("merge_subtypes rewrites and is idempotent") {
  const std::map<std::string, std::string> merge = {
      {"gsp.pers", "gsp.hum"}, {"gsp.org", "gsp.hum"}};
  Document doc = gsp_doc("d", {"org", "loc", "pers"});
  const Document merged = merge_subtypes(doc, merge, testing::schema());
  CHECK(merged.sentences[0].spans[0].sub_type == "hum");
  CHECK(merged.sentences[1].spans[0].sub_type == "loc");
  CHECK(merged.sentences[2].spans[0].sub_type == "hum");
  const Document twice = merge_subtypes(merged, merge, testing::schema());
  for (std::size_t i = 0; i < 3; ++i)
    CHECK(twice.sentences[i].spans[0] == merged.sentences[i].spans[0]);

  const std::map<std::string, std::string> bad = {{"gsp.org", "gsp.zzz"}};
  CHECK_THROWS_WITH_AS(merge_subtypes(doc, bad, testing::schema()),
                       doctest::Contains("UnknownLabel"), Error);
}

TEST_CASE("evaluation_report on a hand-scored toy pair") {
  // ref: loc loc org pers ; hyp: loc org org loc
  const Document ref = gsp_doc("d", {"loc", "loc", "org", "pers"});
  Document hyp = ref;
  hyp.sentences[1].spans[0].sub_type = "org";
  hyp.sentences[3].spans[0].sub_type = "loc";
  const ScoreReport report =
      evaluation_report(one_doc(ref), one_doc(hyp), EvalOptions{});
  REQUIRE(report.rows.size() == 3);
  // rows sorted by label: gsp.loc, gsp.org, gsp.pers
  CHECK(report.rows[0].label == "gsp.loc");
  CHECK(report.rows[0].ref_count == 2);
  CHECK(report.rows[0].precision == doctest::Approx(0.5));
  CHECK(report.rows[0].recall == doctest::Approx(0.5));
  CHECK(report.rows[1].label == "gsp.org");
  CHECK(report.rows[1].precision == doctest::Approx(0.5));
  CHECK(report.rows[1].recall == doctest::Approx(1.0));
  CHECK(report.rows[2].label == "gsp.pers");
  CHECK(report.rows[2].recall == 0.0);
  CHECK(report.ser == doctest::Approx(0.5));
  CHECK(report.confusion.at({"gsp.loc", "gsp.org"}) == 1);
  CHECK(report.confusion.at({"gsp.pers", "gsp.loc"}) == 1);

  const std::string rendered = render_report(report);
  CHECK(rendered.find("gsp.loc") != std::string::npos);
  CHECK(rendered.find("SER 0.5000") != std::string::npos);
}

TEST_CASE("evaluation_report identity gives perfect scores") {
  const Document ref = gsp_doc("d", {"loc", "org"});
  const ScoreReport report =
      evaluation_report(one_doc(ref), one_doc(ref), EvalOptions{});
  for (const PrfRow& row : report.rows) {
    CHECK(row.precision == 1.0);
    CHECK(row.recall == 1.0);
  }
  CHECK(report.ser == 0.0);
}

TEST_CASE("evaluation_report with a merge map") {
  const Document ref = gsp_doc("d", {"loc", "org", "pers"});
  Document hyp = ref;
  hyp.sentences[2].spans[0].sub_type = "org";  // pers tagged as org
  EvalOptions options;
  options.merge = {{"gsp.pers", "gsp.hum"}, {"gsp.org", "gsp.hum"}};
  const ScoreReport report =
      evaluation_report(one_doc(ref), one_doc(hyp), options);
  bool saw_hum = false;
  for (const PrfRow& row : report.rows) {
    CHECK(row.label != "gsp.pers");
    CHECK(row.label != "gsp.org");
    if (row.label == "gsp.hum") {
      saw_hum = true;
      CHECK(row.precision == 1.0);  // the org/pers confusion dissolves
      CHECK(row.recall == 1.0);
    }
  }
  CHECK(saw_hum);
}

// Merging unions the correct sets: the merged label's correct count never
// drops below the sum of its parts', so merged recall is at least the
// ref-count-weighted mean of the parts' recalls (cross-part confusions can
// only add to it).
TEST_CASE("merging never loses correct slots") {
  std::mt19937_64 rng(17);
  const char* subs[] = {"loc", "pers", "org"};
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::optional<std::string>> ref_subs, hyp_subs;
    const std::size_t n = 3 + rng() % 8;
    for (std::size_t i = 0; i < n; ++i) {
      ref_subs.emplace_back(subs[rng() % 3]);
      hyp_subs.emplace_back(subs[rng() % 3]);
    }
    const Document ref = gsp_doc("d", ref_subs);
    Document hyp = ref;
    for (std::size_t i = 0; i < n; ++i)
      hyp.sentences[i].spans[0].sub_type = hyp_subs[i];

    const auto plain = align_slots(ref, hyp);
    const PrfRow org = score_prf(plain, "gsp.org");
    const PrfRow pers = score_prf(plain, "gsp.pers");

    const std::map<std::string, std::string> merge = {
        {"gsp.pers", "gsp.hum"}, {"gsp.org", "gsp.hum"}};
    const auto merged =
        align_slots(merge_subtypes(ref, merge, testing::schema()),
                    merge_subtypes(hyp, merge, testing::schema()));
    const PrfRow hum = score_prf(merged, "gsp.hum");

    const double correct_org = org.recall * double(org.ref_count);
    const double correct_pers = pers.recall * double(pers.ref_count);
    const double correct_hum = hum.recall * double(hum.ref_count);
    CHECK(correct_hum >= correct_org + correct_pers - 1e-9);
    if (org.ref_count + pers.ref_count > 0)
      CHECK(hum.recall >= (correct_org + correct_pers) /
                                  double(org.ref_count + pers.ref_count) -
                              1e-9);
  }
}

TEST_CASE("scores are invariant under consistent relabeling") {
  const Document ref = gsp_doc("d", {"org", "loc", "org"});
  Document hyp = ref;
  hyp.sentences[1].spans[0].sub_type = "org";
  const double f_before =
      score_prf(align_slots(ref, hyp), "gsp.org").f_measure;

  auto relabel = [](Document d) {
    for (Sentence& s : d.sentences)
      for (AnnotatedSpan& sp : s.spans)
        if (sp.sub_type == "org") sp.sub_type = "hum";
    return d;
  };
  const double f_after =
      score_prf(align_slots(relabel(ref), relabel(hyp)), "gsp.hum").f_measure;
  CHECK(f_before == doctest::Approx(f_after).epsilon(1e-12));
}

TEST_CASE("gold_spans mode isolates subtype resolution") {
  const Document ref = gsp_doc("d", {"org", "loc"});
  // hypothesis missed the first entity entirely and invented one elsewhere
  Document hyp = ref;
  hyp.sentences[0].spans.clear();
  AnnotatedSpan spurious;
  spurious.first_token = 1;
  spurious.last_token = 1;
  spurious.main_type = "pers";
  hyp.sentences[0].spans.push_back(spurious);

  EvalOptions options;
  options.gold_spans = true;
  const ScoreReport report =
      evaluation_report(one_doc(ref), one_doc(hyp), options);
  CHECK(report.ref_slots == 2);
  // the missed span scores as the default subtype; the spurious span is gone
  for (const PrfRow& row : report.rows) CHECK(row.label.rfind("gsp", 0) == 0);
  const ScoreReport plain =
      evaluation_report(one_doc(ref), one_doc(hyp), EvalOptions{});
  CHECK(plain.ser > report.ser);
}

TEST_CASE("report against a baseline hypothesis adds baseline rows") {
  const Document ref = gsp_doc("d", {"org", "loc"});
  Document base = ref;
  base.sentences[0].spans[0].sub_type = "loc";
  const Corpus baseline = one_doc(base);
  const ScoreReport report =
      evaluation_report(one_doc(ref), one_doc(ref), EvalOptions{}, &baseline);
  CHECK(!report.baseline_rows.empty());
  const std::string rendered = render_report(report);
  CHECK(rendered.find("baseline") != std::string::npos);
}
