#ifndef FOCALE_FEATURES_HPP
#define FOCALE_FEATURES_HPP

#include <compare>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "focale/chunker.hpp"
#include "focale/corpus.hpp"
#include "focale/lexicon.hpp"

namespace focale {

/// Feature kinds, declared in canonical-name alphabetical order so enum
/// ordering and text ordering coincide.
enum class FeatureKind {
  Clust,            // CLUST:<cluster_id>
  CoocNe,           // COOC_NE:<main_type>
  FeelingNp,        // FEELING_NP
  FinerLocCooc,     // FINER_LOC_COOC
  Lemma,            // LEMMA:<lemma>:<left|right>
  PosTag,           // POS:<pos>:<left|right>
  SubjOfHumanVerb,  // SUBJ_OF_HUMAN_VERB
  Trig,             // TRIG:<role>:<left|right>
  VclassGov         // VCLASS_GOV:<verb_class>
};

std::string_view feature_kind_name(FeatureKind k);
std::optional<FeatureKind> feature_kind_from_name(std::string_view name);

/// Canonical (kind, payload) pair; `KIND:payload` text form round-trips.
struct FeatureId {
  FeatureKind kind;
  std::string payload;

  auto operator<=>(const FeatureId&) const = default;

  std::string to_string() const;
  static FeatureId parse(std::string_view text);
};

struct ContextWindow {
  std::size_t radius = 5;        ///< tokens each side, >= 1
  bool sentence_bounded = true;  ///< clip at sentence edges
};

/// Active feature set around one entity occurrence.
struct FeatureVector {
  std::string doc_id;
  std::size_t sentence_index = 0;
  std::size_t first_token = 0;
  std::size_t last_token = 0;
  std::string main_type;
  std::set<FeatureId> active;
  std::optional<std::string> gold_subtype;
};

/// Extracts the context features of `span`. All computation (POS selection,
/// chunking, gazetteer matching) is confined to the window slice, so tokens
/// outside the window can never change the result.
FeatureVector extract_features(const Document& doc, std::size_t sentence_index,
                               const AnnotatedSpan& span,
                               const ContextWindow& window,
                               const LexiconSet& lex,
                               std::span<const ChunkPattern> patterns);

/// Dense feature index with a stable ordering (kind, then payload).
struct Vocabulary {
  std::vector<FeatureId> features;            // index -> feature
  std::map<FeatureId, std::size_t> index_of;  // feature -> index

  std::size_t size() const { return features.size(); }
};

Vocabulary build_vocabulary(std::span<const FeatureVector> vectors);

}  // namespace focale

#endif  // FOCALE_FEATURES_HPP
