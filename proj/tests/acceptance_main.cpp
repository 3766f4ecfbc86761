// Acceptance suite: one pass/fail line per criterion, exit code = #failures.

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "focale/defaults.hpp"
#include "focale/pipeline.hpp"
#include "test_support.hpp"

using namespace focale;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(const char* name, bool ok, const std::string& detail) {
  std::printf("[%s] %s%s%s\n", ok ? "PASS" : "FAIL", name,
              detail.empty() ? "" : ": ", detail.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

// ---------------------------------------------------------------------------
// 1. exhaustive hypergeometric oracle, N <= 200

void criterion_hypergeom_oracle() {
  const auto t0 = std::chrono::steady_clock::now();
  constexpr std::size_t kMaxN = 200;

  // Pascal's triangle in long double: the independent enumeration oracle.
  std::vector<std::vector<long double>> choose(kMaxN + 1);
  for (std::size_t n = 0; n <= kMaxN; ++n) {
    choose[n].assign(n + 1, 1.0L);
    for (std::size_t k = 1; k < n; ++k)
      choose[n][k] = choose[n - 1][k - 1] + choose[n - 1][k];
  }

  std::atomic<std::uint64_t> checked{0};
  std::atomic<bool> ok{true};
  std::atomic<std::uint64_t> worst_bits{0};  // max abs error, as double bits

  auto update_worst = [&](double err) {
    std::uint64_t bits;
    std::memcpy(&bits, &err, sizeof bits);
    std::uint64_t cur = worst_bits.load();
    while (cur < bits && !worst_bits.compare_exchange_weak(cur, bits)) {
    }
  };

  std::atomic<std::size_t> next_n{0};
  auto work = [&]() {
    std::vector<long double> suffix(kMaxN + 2);
    std::vector<long double> prefix(kMaxN + 2);
    while (true) {
      const std::size_t N = next_n.fetch_add(1);
      if (N > kMaxN) break;
      for (std::size_t K = 0; K <= N; ++K) {
        for (std::size_t n = 0; n <= N; ++n) {
          const std::size_t j_min = (n + K > N) ? n + K - N : 0;
          const std::size_t j_max = std::min(K, n);
          const long double denom = choose[N][n];
          // pmf over the support, then tails by prefix/suffix sums
          prefix[j_min] = 0.0L;
          for (std::size_t j = j_min; j <= j_max; ++j)
            prefix[j + 1] =
                prefix[j] + choose[K][j] * choose[N - K][n - j] / denom;
          suffix[j_max + 1] = 0.0L;
          for (std::size_t j = j_max + 1; j-- > j_min;)
            suffix[j] =
                suffix[j + 1] + choose[K][j] * choose[N - K][n - j] / denom;
          for (std::size_t k = 0; k <= j_max; ++k) {
            const double want_over =
                k <= j_min ? 1.0 : static_cast<double>(suffix[k]);
            const double want_under =
                k >= j_max ? 1.0
                           : (k < j_min ? 0.0 : static_cast<double>(prefix[k + 1]));
            const double got_over = hypergeom_tail(k, K, n, N, Direction::Over);
            const double got_under =
                hypergeom_tail(k, K, n, N, Direction::Under);
            const double err = std::max(std::abs(got_over - want_over),
                                        std::abs(got_under - want_under));
            update_worst(err);
            if (err > 1e-9) ok.store(false);
            checked.fetch_add(1, std::memory_order_relaxed);
          }
        }
      }
    }
  };

  std::size_t workers = std::thread::hardware_concurrency();
  if (workers == 0) workers = 2;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  for (std::thread& t : pool) t.join();

  const double elapsed = seconds_since(t0);
  double worst;
  {
    const std::uint64_t bits = worst_bits.load();
    std::memcpy(&worst, &bits, sizeof worst);
  }
  char detail[160];
  std::snprintf(detail, sizeof detail,
                "%llu tuples, max abs error %.3g, %.1f s",
                static_cast<unsigned long long>(checked.load()), worst,
                elapsed);
  report("hypergeometric-oracle-exhaustive",
         ok.load() && elapsed < 60.0, detail);
}

// ---------------------------------------------------------------------------
// 2. specificity spot checks + tail complement identity

void criterion_specificity_spot_checks() {
  bool ok = true;
  std::string detail;

  FeatureStats s;
  s.feature = FeatureId::parse("FEELING_NP");
  s.category = "org";
  s.feature_in_category = 3;
  s.category_total = 5;
  s.feature_overall = 4;
  s.corpus_total = 20;
  const SpecificityScore score = specificity_score(s);
  const double expected = 496.0 / 15504.0;
  if (score.direction != Direction::Over ||
      std::abs(score.p_level - expected) > 1e-9) {
    ok = false;
    detail = "spot check (3,5,4,20) off";
  }

  std::mt19937_64 rng(20240101);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const std::uint64_t N = 1 + rng() % 2000;
    const std::uint64_t K = rng() % (N + 1);
    const std::uint64_t n = rng() % (N + 1);
    const std::uint64_t m = std::min(K, n);
    if (m == 0) {
      --i;
      continue;
    }
    const std::uint64_t k = 1 + rng() % m;
    const double over = hypergeom_tail(k, K, n, N, Direction::Over);
    const double under = hypergeom_tail(k - 1, K, n, N, Direction::Under);
    worst = std::max(worst, std::abs(over + under - 1.0));
  }
  if (worst > 1e-12) {
    ok = false;
    detail = "complement identity error " + std::to_string(worst);
  }
  if (ok) {
    char buf[96];
    std::snprintf(buf, sizeof buf,
                  "spot value ok, worst complement error %.3g", worst);
    detail = buf;
  }
  report("specificity-spot-checks", ok, detail);
}

// ---------------------------------------------------------------------------
// 3. round-trips

void criterion_round_trips() {
  bool ok = true;
  std::string detail;
  testing::RandomDocGen gen(31415);
  for (int i = 0; i < 100 && ok; ++i) {
    const Document doc = gen.next("doc" + std::to_string(i));
    const Document back =
        parse_inline(serialize_inline(doc), testing::schema(), doc.doc_id);
    if (back.sentences.size() != doc.sentences.size()) {
      ok = false;
      detail = "sentence count changed";
      break;
    }
    for (std::size_t si = 0; si < doc.sentences.size(); ++si) {
      const Sentence& a = doc.sentences[si];
      const Sentence& b = back.sentences[si];
      if (a.tokens.size() != b.tokens.size() || !(a.spans == b.spans)) {
        ok = false;
        detail = "document " + doc.doc_id + " changed";
        break;
      }
      for (std::size_t t = 0; t < a.tokens.size(); ++t)
        if (a.tokens[t].surface != b.tokens[t].surface) {
          ok = false;
          detail = "token surfaces changed";
          break;
        }
    }
  }

  // rules file identity on a trained rule set
  GeneratorSpec spec;
  spec.seed = 23;
  spec.n_sentences = 800;
  const Corpus corpus =
      generate(spec, parse_templates(defaults::templates()), testing::schema());
  const TagContext ctx = testing::context();
  RulesFile file = train_rules(corpus, ctx, Config{});
  if (file.rulesets.at("gsp").rules.empty()) {
    ok = false;
    detail = "no rules trained for the rules-file check";
  } else {
    const std::string text = serialize_rules(file);
    const RulesFile back = parse_rules(text);
    if (!(back == file) || serialize_rules(back) != text) {
      ok = false;
      detail = "rules file round-trip differs";
    }
  }
  report("round-trips", ok,
         ok ? "100 documents + rules file identical" : detail);
}

// ---------------------------------------------------------------------------
// 4. train determinism, through the real command

void criterion_train_determinism() {
  const fs::path dir =
      fs::temp_directory_path() / "focale_acceptance_determinism";
  fs::create_directories(dir);
  const fs::path spec_path = dir / "spec.txt";
  const fs::path corpus_path = dir / "corpus.txt";
  const fs::path r1 = dir / "rules1.tsv";
  const fs::path r2 = dir / "rules2.tsv";
  {
    std::FILE* f = std::fopen(spec_path.string().c_str(), "w");
    std::fputs("seed = 7\nsentences = 2000\ncue_reliability = 0.9\n", f);
    std::fclose(f);
  }
  auto shell = [&](const std::string& cmd) {
    return std::system((cmd + " > /dev/null 2>&1").c_str());
  };
  const std::string bin = FOCALE_BIN;
  bool ok = shell(bin + " synth " + spec_path.string() + " -o " +
                  corpus_path.string()) == 0;
  ok = ok && shell(bin + " train " + corpus_path.string() + " -o " +
                   r1.string()) == 0;
  ok = ok && shell(bin + " train " + corpus_path.string() + " -o " +
                   r2.string()) == 0;
  std::string detail = "command failed";
  if (ok) {
    const std::string a = read_file(r1.string());
    const std::string b = read_file(r2.string());
    ok = !a.empty() && a == b;
    detail = ok ? "byte-identical rules files (" +
                      std::to_string(a.size()) + " bytes)"
                : "rules files differ";
  }
  fs::remove_all(dir);
  report("train-determinism", ok, detail);
}

// ---------------------------------------------------------------------------
// 5 + 6 + 10. learnability, scarcity, rule self-consistency

void criteria_learnability_scarcity_consistency() {
  const auto t0 = std::chrono::steady_clock::now();
  GeneratorSpec spec;
  spec.seed = 7;
  spec.n_sentences = 5000;
  spec.cue_reliability = 0.9;  // paper-proportioned distribution is the default
  const Corpus corpus =
      generate(spec, parse_templates(defaults::templates()), testing::schema());

  const TagContext ctx = testing::context();
  const auto vectors = extract_training_vectors(corpus, ctx);
  const auto rulesets =
      induce_rules(vectors, testing::schema(), InductionParams{});
  const SubtypeAccuracy acc = gold_span_accuracy(corpus, rulesets, ctx);
  const double elapsed = seconds_since(t0);

  {
    char detail[160];
    std::snprintf(detail, sizeof detail,
                  "tagged %.4f vs baseline %.4f (+%.1f points), %.1f s",
                  acc.tagged, acc.baseline,
                  100.0 * (acc.tagged - acc.baseline), elapsed);
    report("learnability-gain",
           acc.tagged - acc.baseline >= 0.15 && elapsed < 120.0, detail);
  }

  {
    bool no_pers_rule = true;
    for (const auto& [main, rs] : rulesets)
      for (const Rule& r : rs.rules)
        if (r.target == "pers") no_pers_rule = false;

    // gsp.pers recall over gold spans
    auto [hyp, bundles] = tag_corpus(corpus, rulesets, ctx, 0, true);
    EvalOptions options;
    const ScoreReport rep = evaluation_report(corpus, hyp, options);
    double pers_recall = 0.0;
    std::size_t pers_ref = 0;
    for (const PrfRow& row : rep.rows)
      if (row.label == "gsp.pers") {
        pers_recall = row.recall;
        pers_ref = row.ref_count;
      }
    char detail[160];
    std::snprintf(detail, sizeof detail,
                  "%s, %zu gsp.pers references, recall %.4f",
                  no_pers_rule ? "no gsp.pers rule" : "FOUND a gsp.pers rule",
                  pers_ref, pers_recall);
    report("scarcity-pathology",
           no_pers_rule && pers_ref > 0 && pers_recall <= 0.05, detail);
  }

  {
    // every stored rule statistic must reproduce exactly from the vectors
    bool ok = true;
    std::size_t n_rules = 0;
    for (const auto& [main, rs] : rulesets) {
      std::vector<FeatureVector> group;
      for (const FeatureVector& v : vectors)
        if (v.main_type == main) group.push_back(v);
      std::map<std::string, std::uint64_t> cat_total;
      for (const FeatureVector& v : group) ++cat_total[*v.gold_subtype];
      for (const Rule& r : rs.rules) {
        ++n_rules;
        const DiscPower dp = discriminative_power(r.features, r.target, group);
        std::uint64_t hits = 0;
        for (const FeatureVector& v : group) {
          bool all = true;
          for (const FeatureId& f : r.features)
            if (!v.active.count(f)) all = false;
          if (all && *v.gold_subtype == r.target) ++hits;
        }
        const double p = hypergeom_tail(hits, dp.support,
                                        cat_total.at(r.target), group.size(),
                                        Direction::Over);
        if (dp.probability != r.disc_power || dp.support != r.support ||
            p != r.p_level)
          ok = false;
      }
    }
    report("rule-self-consistency", ok && n_rules > 0,
           std::to_string(n_rules) + " rules recomputed exactly");
  }
}

// ---------------------------------------------------------------------------
// 7. merge effect on an overlap corpus

void criterion_merge_effect() {
  // pers and org share 70% of their cue distribution (volitional subject);
  // 30% stays class-specific (feeling NP vs. communication verb)
  std::string tpl;
  tpl += "gsp.loc\tils se sont retrouvés {CUE} {NE} .\ten\n";
  tpl += "gsp.loc\tle sommet aura lieu {CUE} {NE} .\ten\n";
  tpl += "gsp.loc\tle vol reliait {CUE} et {NE} .\tParis\n";
  for (int i = 0; i < 7; ++i) tpl += "gsp.org\t{NE} {CUE} .\tveut la paix\n";
  for (int i = 0; i < 3; ++i)
    tpl += "gsp.org\t{NE} {CUE} un accord .\ta signé\n";
  for (int i = 0; i < 7; ++i) tpl += "gsp.pers\t{NE} {CUE} .\tveut la paix\n";
  for (int i = 0; i < 3; ++i)
    tpl += "gsp.pers\t{CUE} entre elles et {NE} .\tl' amitié\n";

  GeneratorSpec spec;
  spec.seed = 11;
  spec.n_sentences = 4000;
  spec.cue_reliability = 0.9;
  spec.subtype_distribution = {
      {"gsp.loc", 0.60}, {"gsp.pers", 0.12}, {"gsp.org", 0.28}};
  const Corpus corpus =
      generate(spec, parse_templates(tpl), testing::schema());

  const TagContext ctx = testing::context();
  const auto vectors = extract_training_vectors(corpus, ctx);
  const auto rulesets =
      induce_rules(vectors, testing::schema(), InductionParams{});
  auto [hyp, bundles] = tag_corpus(corpus, rulesets, ctx, 0, true);

  const ScoreReport three_way =
      evaluation_report(corpus, hyp, EvalOptions{});
  EvalOptions merged_options;
  merged_options.merge = {{"gsp.pers", "gsp.hum"}, {"gsp.org", "gsp.hum"}};
  const ScoreReport merged = evaluation_report(corpus, hyp, merged_options);

  double f_pers = 0.0, f_org = 0.0, f_hum = 0.0;
  for (const PrfRow& row : three_way.rows) {
    if (row.label == "gsp.pers") f_pers = row.f_measure;
    if (row.label == "gsp.org") f_org = row.f_measure;
  }
  for (const PrfRow& row : merged.rows)
    if (row.label == "gsp.hum") f_hum = row.f_measure;

  char detail[160];
  std::snprintf(detail, sizeof detail,
                "F(gsp.hum)=%.4f vs 3-way max(F(pers)=%.4f, F(org)=%.4f)",
                f_hum, f_pers, f_org);
  report("merge-effect", f_hum > std::max(f_pers, f_org), detail);
}

// ---------------------------------------------------------------------------
// 8. slot error rate unit cases

void criterion_ser_cases() {
  auto doc_with = [&](const std::vector<std::optional<std::string>>& subs) {
    std::string raw;
    for (std::size_t i = 0; i < subs.size(); ++i)
      raw += i ? "\nFrance parle ." : "France parle .";
    Document d = testing::doc_from_text("d", raw);
    for (std::size_t i = 0; i < subs.size(); ++i)
      testing::add_span(d, i, 0, 0, "gsp", subs[i]);
    return d;
  };
  bool ok = true;
  const Document ref = doc_with({"loc", "org", "loc", "org"});
  if (slot_error_rate(align_slots(ref, ref)) != 0.0) ok = false;

  Document hyp = ref;
  hyp.sentences[0].spans.clear();
  hyp.sentences[1].spans[0].sub_type = "loc";
  const double ser = slot_error_rate(align_slots(ref, hyp));
  if (std::abs(ser - 0.5) > 1e-12) ok = false;

  Document ins = ref;
  AnnotatedSpan extra;
  extra.first_token = 1;
  extra.last_token = 1;
  extra.main_type = "pers";
  ins.sentences[2].spans.push_back(extra);
  const double ser_ins = slot_error_rate(align_slots(ref, ins));
  if (std::abs(ser_ins - 0.25) > 1e-12) ok = false;

  char detail[96];
  std::snprintf(detail, sizeof detail,
                "identity 0.0, del+subst %.4f, insertion %.4f", ser, ser_ins);
  report("ser-unit-cases", ok, detail);
}

// ---------------------------------------------------------------------------
// 9. feature locality, 500 randomized trials

void criterion_feature_locality() {
  testing::RandomDocGen gen(271828);
  std::mt19937_64& rng = gen.rng();
  const TagContext base_ctx = testing::context();
  std::size_t trials = 0;
  bool ok = true;
  while (trials < 500) {
    Document doc = gen.next("d");
    ContextWindow window;
    window.radius = 1 + rng() % 4;
    for (std::size_t si = 0; si < doc.sentences.size() && trials < 500; ++si) {
      if (doc.sentences[si].spans.empty()) continue;
      const AnnotatedSpan span = doc.sentences[si].spans[0];
      const std::size_t w_lo = span.first_token >= window.radius
                                   ? span.first_token - window.radius
                                   : 0;
      const std::size_t w_hi = std::min(
          span.last_token + window.radius, doc.sentences[si].tokens.size() - 1);
      std::vector<std::pair<std::size_t, std::size_t>> outside;
      for (std::size_t sj = 0; sj < doc.sentences.size(); ++sj)
        for (std::size_t t = 0; t < doc.sentences[sj].tokens.size(); ++t)
          if (sj != si || t < w_lo || t > w_hi) outside.emplace_back(sj, t);
      if (outside.empty()) continue;

      const FeatureVector before = extract_features(
          doc, si, span, window, *base_ctx.lex, base_ctx.patterns);
      const auto [sj, tj] = outside[rng() % outside.size()];
      doc.sentences[sj].tokens[tj].surface = gen.word();
      const FeatureVector after = extract_features(
          doc, si, span, window, *base_ctx.lex, base_ctx.patterns);
      if (!(before.active == after.active)) ok = false;
      ++trials;
    }
  }
  report("feature-locality", ok, std::to_string(trials) + " trials");
}

}  // namespace

int main() {
  criterion_hypergeom_oracle();
  criterion_specificity_spot_checks();
  criterion_round_trips();
  criterion_train_determinism();
  criteria_learnability_scarcity_consistency();
  criterion_merge_effect();
  criterion_ser_cases();
  criterion_feature_locality();
  if (g_failures == 0)
    std::printf("all acceptance criteria passed\n");
  else
    std::printf("%d acceptance criteria FAILED\n", g_failures);
  return g_failures;
}
