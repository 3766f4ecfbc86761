#ifndef FOCALE_PIPELINE_HPP
#define FOCALE_PIPELINE_HPP

#include <string>
#include <vector>

#include "focale/config.hpp"
#include "focale/corpus.hpp"
#include "focale/eval.hpp"
#include "focale/synth.hpp"
#include "focale/tagger.hpp"

namespace focale {

/// Loaded resources backing a TagContext. Keep alive while tagging.
struct Resources {
  TagSchema schema;
  LexiconSet lex;
  std::vector<ChunkPattern> patterns;
};

/// Loads the configured resource files, falling back to the built-in data
/// for any path left empty.
Resources load_resources(const Config& config);

TagContext make_context(const Resources& resources, const Config& config);

/// Feature vectors for every gold span whose main type declares subtypes.
/// A span without an explicit subtype trains as the schema default.
std::vector<FeatureVector> extract_training_vectors(const Corpus& corpus,
                                                    const TagContext& ctx);

/// extract + induce + header provenance; the result serializes to the rules
/// file format.
RulesFile train_rules(const Corpus& corpus, const TagContext& ctx,
                      const Config& config);

/// Tags every document (worker pool of `jobs` threads, input order
/// preserved). gold_spans keeps the input spans and only resolves subtypes.
std::pair<Corpus, std::vector<EntityBundle>> tag_corpus(
    const Corpus& corpus, const std::map<std::string, RuleSet>& rulesets,
    const TagContext& ctx, std::size_t jobs, bool gold_spans = false);

Corpus baseline_corpus(const Corpus& corpus, const TagContext& ctx);

/// Fraction of subtype-bearing gold spans whose resolved subtype matches,
/// with the matching baseline (all-default) fraction.
struct SubtypeAccuracy {
  double tagged = 0.0;
  double baseline = 0.0;
  std::size_t spans = 0;
};
SubtypeAccuracy gold_span_accuracy(const Corpus& corpus,
                                   const std::map<std::string, RuleSet>& rules,
                                   const TagContext& ctx);

}  // namespace focale

#endif  // FOCALE_PIPELINE_HPP
