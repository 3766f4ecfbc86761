#ifndef FOCALE_LEXICON_HPP
#define FOCALE_LEXICON_HPP

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "focale/corpus.hpp"

namespace focale {

enum class Pos { Noun, Verb, Adj, Det, Prep, Pron, Adv, Punc, Propn, Unk };

std::string_view pos_name(Pos p);
std::optional<Pos> pos_from_name(std::string_view name);

struct MorphEntry {
  std::string form;
  std::string lemma;
  Pos pos = Pos::Unk;
  std::optional<char> gender;  // 'm' / 'f'
  std::optional<char> number;  // 's' / 'p'

  auto operator<=>(const MorphEntry&) const = default;
};

enum class TriggerRole { None, Title, LocPrep, OrgKeyword };

std::string_view trigger_role_name(TriggerRole r);
std::optional<TriggerRole> trigger_role_from_name(std::string_view name);

/// Location granularity, ordered from finest to coarsest.
enum class Granularity { Town = 0, Region = 1, Country = 2 };

std::string_view granularity_name(Granularity g);
std::optional<Granularity> granularity_from_name(std::string_view name);

struct GazetteerEntry {
  std::vector<std::string> phrase;
  std::string category;
  TriggerRole trigger_role = TriggerRole::None;
  std::optional<Granularity> granularity;

  auto operator<=>(const GazetteerEntry&) const = default;
};

/// One synonym cluster, materialized from the cluster TSV rows.
struct SemCluster {
  std::string cluster_id;
  std::string label;
  std::set<std::string> members;  ///< lemmas; never empty
};

enum class SubjectRestriction { Human, Any };

struct VerbFrame {
  std::string lemma;
  SubjectRestriction subject_restriction = SubjectRestriction::Any;
  std::optional<std::string> verb_class;
};

/// One longest non-overlapping gazetteer hit; token indices are inclusive
/// and sentence-local.
struct GazetteerMatch {
  std::size_t first_token;
  std::size_t last_token;
  const GazetteerEntry* entry;
};

/// The four resource layers. Immutable after load; all queries are
/// read-only and safe to share across threads.
class LexiconSet {
 public:
  /// Loads the TSV files (UTF-8, tab-separated, `#` comments). Duplicate
  /// rows collapse to one entry. Throws IoError / ParseError(MalformedRow).
  static LexiconSet load(const std::string& morph_path,
                         const std::string& gazetteer_path,
                         const std::string& cluster_path,
                         const std::string& verb_path);
  /// Same formats, from in-memory text.
  static LexiconSet parse(std::string_view morph_tsv,
                          std::string_view gazetteer_tsv,
                          std::string_view cluster_tsv,
                          std::string_view verb_tsv);

  /// All analyses for a form: exact match first, lowercase fallback second.
  /// Unknown forms get a single PROPN (capitalized) or UNK analysis; the
  /// fallback never mixes with dictionary analyses.
  std::vector<MorphEntry> lookup_morph(std::string_view form) const;

  /// Left-to-right longest-match scan; matches never overlap and scanning
  /// resumes after each match.
  std::vector<GazetteerMatch> match_gazetteer(const Sentence& sentence) const;
  std::vector<GazetteerMatch> match_gazetteer(
      const std::vector<Token>& tokens) const;

  /// Exact full-phrase lookup (no scan), for an already-delimited span.
  const GazetteerEntry* find_phrase(const std::vector<std::string>& phrase) const;

  std::set<std::string> lookup_cluster(std::string_view lemma) const;
  /// Display label of a cluster id; nullptr when unknown.
  const std::string* cluster_label(std::string_view cluster_id) const;
  /// All clusters with their member lemmas, sorted by id.
  std::vector<SemCluster> sem_clusters() const;
  /// True if some cluster of `lemma` carries the given label.
  bool lemma_has_cluster_label(std::string_view lemma,
                               std::string_view label) const;

  std::optional<VerbFrame> lookup_verb_frame(std::string_view lemma) const;

  std::size_t morph_size() const { return morph_rows_; }
  std::size_t gazetteer_size() const { return entries_.size(); }
  std::size_t cluster_size() const { return cluster_rows_; }
  std::size_t verb_size() const { return verbs_.size(); }

 private:
  struct TrieNode {
    std::map<std::string, std::size_t, std::less<>> children;
    int entry = -1;  // index into entries_, -1 = not a phrase end
  };

  void add_gazetteer(GazetteerEntry entry);
  const TrieNode* step(const TrieNode* node, const std::string& surface) const;

  std::map<std::string, std::vector<MorphEntry>, std::less<>> morph_;
  std::size_t morph_rows_ = 0;
  std::vector<GazetteerEntry> entries_;
  std::vector<TrieNode> trie_{TrieNode{}};
  std::map<std::string, std::set<std::string>, std::less<>> lemma_clusters_;
  std::map<std::string, std::string, std::less<>> cluster_labels_;
  std::size_t cluster_rows_ = 0;
  std::map<std::string, VerbFrame, std::less<>> verbs_;
};

}  // namespace focale

#endif  // FOCALE_LEXICON_HPP
