#include "focale/pipeline.hpp"

#include <atomic>
#include <thread>

#include "focale/defaults.hpp"

namespace focale {

Resources load_resources(const Config& config) {
  Resources r;
  r.schema = config.schema_path.empty()
                 ? TagSchema::parse(defaults::schema())
                 : TagSchema::load(config.schema_path);
  const std::string morph = config.morph_path.empty()
                                ? std::string(defaults::morph())
                                : read_file(config.morph_path);
  const std::string gaz = config.gazetteer_path.empty()
                              ? std::string(defaults::gazetteer())
                              : read_file(config.gazetteer_path);
  const std::string clusters = config.clusters_path.empty()
                                   ? std::string(defaults::clusters())
                                   : read_file(config.clusters_path);
  const std::string verbs = config.verbs_path.empty()
                                ? std::string(defaults::verbs())
                                : read_file(config.verbs_path);
  r.lex = LexiconSet::parse(morph, gaz, clusters, verbs);
  r.patterns = config.patterns_path.empty()
                   ? parse_patterns(defaults::patterns())
                   : load_patterns(config.patterns_path);
  return r;
}

TagContext make_context(const Resources& resources, const Config& config) {
  TagContext ctx;
  ctx.lex = &resources.lex;
  ctx.schema = &resources.schema;
  ctx.patterns = resources.patterns;
  ctx.window = config.window;
  return ctx;
}

std::vector<FeatureVector> extract_training_vectors(const Corpus& corpus,
                                                    const TagContext& ctx) {
  std::vector<FeatureVector> out;
  for (const Document& doc : corpus.documents) {
    for (std::size_t si = 0; si < doc.sentences.size(); ++si) {
      for (const AnnotatedSpan& span : doc.sentences[si].spans) {
        if (!ctx.schema->has_subtypes(span.main_type)) continue;
        FeatureVector fv = extract_features(doc, si, span, ctx.window,
                                            *ctx.lex, ctx.patterns);
        if (!fv.gold_subtype)
          fv.gold_subtype = ctx.schema->default_subtype.at(span.main_type);
        out.push_back(std::move(fv));
      }
    }
  }
  return out;
}

RulesFile train_rules(const Corpus& corpus, const TagContext& ctx,
                      const Config& config) {
  const auto vectors = extract_training_vectors(corpus, ctx);
  RulesFile file;
  file.params = config.induction;
  file.rulesets = induce_rules(vectors, *ctx.schema, config.induction);
  file.extra_header.emplace_back("radius", std::to_string(ctx.window.radius));
  file.extra_header.emplace_back(
      "sentence_bounded", ctx.window.sentence_bounded ? "true" : "false");
  return file;
}

std::pair<Corpus, std::vector<EntityBundle>> tag_corpus(
    const Corpus& corpus, const std::map<std::string, RuleSet>& rulesets,
    const TagContext& ctx, std::size_t jobs, bool gold_spans) {
  const std::size_t n = corpus.documents.size();
  std::vector<std::pair<Document, std::vector<EntityBundle>>> results(n);

  std::size_t workers = jobs == 0 ? std::thread::hardware_concurrency() : jobs;
  if (workers == 0) workers = 1;
  workers = std::min(workers, std::max<std::size_t>(n, 1));

  std::atomic<std::size_t> next{0};
  auto work = [&]() {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) break;
      results[i] = gold_spans
                       ? resolve_document(corpus.documents[i], rulesets, ctx)
                       : tag_document(corpus.documents[i], rulesets, ctx);
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (std::thread& t : pool) t.join();
  }

  Corpus tagged{{}, corpus.schema};
  std::vector<EntityBundle> bundles;
  for (auto& [doc, doc_bundles] : results) {
    tagged.documents.push_back(std::move(doc));
    bundles.insert(bundles.end(), doc_bundles.begin(), doc_bundles.end());
  }
  return {std::move(tagged), std::move(bundles)};
}

Corpus baseline_corpus(const Corpus& corpus, const TagContext& ctx) {
  Corpus out{{}, corpus.schema};
  out.documents.reserve(corpus.documents.size());
  for (const Document& doc : corpus.documents)
    out.documents.push_back(baseline_tag(doc, ctx));
  return out;
}

SubtypeAccuracy gold_span_accuracy(const Corpus& corpus,
                                   const std::map<std::string, RuleSet>& rules,
                                   const TagContext& ctx) {
  SubtypeAccuracy acc;
  std::size_t tagged_ok = 0;
  std::size_t baseline_ok = 0;
  for (const Document& doc : corpus.documents) {
    for (std::size_t si = 0; si < doc.sentences.size(); ++si) {
      for (const AnnotatedSpan& span : doc.sentences[si].spans) {
        if (!ctx.schema->has_subtypes(span.main_type)) continue;
        if (!span.sub_type) continue;
        ++acc.spans;
        const std::string& def = ctx.schema->default_subtype.at(span.main_type);
        if (*span.sub_type == def) ++baseline_ok;
        RuleSet no_rules;
        const RuleSet* ruleset = &no_rules;
        if (auto it = rules.find(span.main_type); it != rules.end())
          ruleset = &it->second;
        else
          no_rules.main_type = span.main_type;
        const Resolution res = resolve_subtype(doc, si, span, *ruleset, ctx);
        if (res.sub_type == *span.sub_type) ++tagged_ok;
      }
    }
  }
  if (acc.spans > 0) {
    acc.tagged = static_cast<double>(tagged_ok) / double(acc.spans);
    acc.baseline = static_cast<double>(baseline_ok) / double(acc.spans);
  }
  return acc;
}

}  // namespace focale
