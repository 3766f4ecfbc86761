#ifndef FOCALE_INDUCTION_HPP
#define FOCALE_INDUCTION_HPP

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "focale/features.hpp"

namespace focale {

/// Occurrence counts of one feature against one category:
/// feature_in_category / category_total (within the category) and
/// feature_overall / corpus_total (over all training vectors).
struct FeatureStats {
  FeatureId feature;
  std::string category;
  std::uint64_t feature_in_category = 0;  // f
  std::uint64_t category_total = 0;       // t
  std::uint64_t feature_overall = 0;      // F
  std::uint64_t corpus_total = 0;         // T
};

enum class Direction { Over, Under };

/// Exact hypergeometric tail. X ~ Hypergeometric(population N, successes K,
/// draws n); Over gives P(X >= k), Under gives P(X <= k). Long-double
/// recurrence seeded by log-factorials; absolute error well under 1e-12.
/// Throws DomainError unless 0 <= K <= N, 0 <= n <= N, 0 <= k <= min(K, n).
double hypergeom_tail(std::uint64_t k, std::uint64_t K, std::uint64_t n,
                      std::uint64_t N, Direction direction);

/// How characteristic a feature is for a category: the tail probability of
/// drawing the observed count under random allocation. Smaller = more
/// characteristic.
struct SpecificityScore {
  FeatureId feature;
  std::string category;
  Direction direction = Direction::Over;
  double p_level = 1.0;
};

SpecificityScore specificity_score(const FeatureStats& stats);

/// One row per (observed feature, observed category), sorted.
/// Throws Error("MissingGold") if any vector lacks a gold subtype.
std::vector<FeatureStats> count_feature_stats(
    std::span<const FeatureVector> vectors);

struct DiscPower {
  double probability = 0.0;   ///< P(gold = target | conjunction active)
  std::uint64_t support = 0;  ///< vectors where the whole conjunction is active
};

/// Unsmoothed maximum-likelihood estimate over the given vectors.
/// Throws Error("ZeroSupport") when the conjunction never fires.
DiscPower discriminative_power(std::span<const FeatureId> conjunction,
                               std::string_view target,
                               std::span<const FeatureVector> vectors);

/// (features -> target) with the joint specificity of the conjunction,
/// its discriminative power, and its support on the training set.
struct Rule {
  std::vector<FeatureId> features;  ///< sorted, 1..max_order entries
  std::string target;
  double p_level = 1.0;
  double disc_power = 0.0;
  std::uint64_t support = 0;

  /// Members joined by '&' in canonical text form.
  std::string canonical_features() const;

  bool operator==(const Rule&) const = default;
};

struct InductionParams {
  double alpha = 0.05;
  std::uint64_t min_support = 3;
  std::size_t max_order = 2;
  double min_dp = 0.6;

  bool operator==(const InductionParams&) const = default;
};

/// Rules for one main type, ordered by (disc_power desc, p_level asc,
/// canonical feature text asc).
struct RuleSet {
  std::string main_type;
  std::vector<Rule> rules;
  InductionParams params;

  bool operator==(const RuleSet&) const = default;
};

/// Candidate generation over single features and conjunctions up to
/// max_order whose members are over-represented for some non-default
/// subtype; filtering by p_level <= alpha, support >= min_support,
/// disc_power >= min_dp; then a greedy cover of the non-default-subtype
/// training vectors. Deterministic. Returns one RuleSet per main type seen.
std::map<std::string, RuleSet> induce_rules(
    std::span<const FeatureVector> vectors, const TagSchema& schema,
    const InductionParams& params);

/// On-disk rules: `# key=value` header lines (induction thresholds plus any
/// extra provenance), then one rule per line:
/// main_type <TAB> f1&f2 <TAB> target <TAB> p_level <TAB> disc_power <TAB> support
struct RulesFile {
  InductionParams params;
  std::vector<std::pair<std::string, std::string>> extra_header;
  std::map<std::string, RuleSet> rulesets;

  bool operator==(const RulesFile&) const = default;
};

std::string serialize_rules(const RulesFile& file);
RulesFile parse_rules(std::string_view text);
RulesFile load_rules(const std::string& path);
void save_rules(const RulesFile& file, const std::string& path);

}  // namespace focale

#endif  // FOCALE_INDUCTION_HPP
