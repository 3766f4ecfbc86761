#ifndef FOCALE_EVAL_HPP
#define FOCALE_EVAL_HPP

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "focale/corpus.hpp"

namespace focale {

enum class MatchStatus { Correct, TypeSubstitution, Deletion, Insertion };

std::string_view match_status_name(MatchStatus s);

/// Pairing of one reference and/or one hypothesis slot. Correct and
/// TypeSubstitution carry both sides with identical boundaries and main
/// types; a main-type clash yields a Deletion plus an Insertion.
struct SlotMatch {
  MatchStatus status;
  std::string doc_id;
  std::size_t sentence_index = 0;
  std::optional<AnnotatedSpan> ref;
  std::optional<AnnotatedSpan> hyp;
};

/// Exact-boundary alignment of two annotations of the same token sequence.
/// Throws Error("TokenMismatch") when the texts differ.
std::vector<SlotMatch> align_slots(const Document& ref, const Document& hyp);

/// Documents paired by doc_id; both corpora must hold the same ids.
std::vector<SlotMatch> align_corpora(const Corpus& ref, const Corpus& hyp);

/// (deletions + insertions + substitutions) / reference slots.
/// Throws Error("EmptyReference") when there are no reference slots.
double slot_error_rate(std::span<const SlotMatch> matches);

struct PrfRow {
  std::string label;
  std::size_t ref_count = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f_measure = 0.0;
  bool undefined = false;  ///< a zero denominator was hit
};

/// Precision/recall/F over slots carrying the given (qualified) label.
PrfRow score_prf(std::span<const SlotMatch> matches, std::string_view label);

/// 2PR/(P+R); 0 when P+R is 0.
double f_measure(double precision, double recall);

/// Rewrites subtype labels per the map of qualified labels
/// ("gsp.pers" -> "gsp.hum"). Idempotent. Throws Error("UnknownLabel")
/// when a target is not declared in the schema.
Document merge_subtypes(const Document& doc,
                        const std::map<std::string, std::string>& merge_map,
                        const TagSchema& schema);
Corpus merge_subtypes(const Corpus& corpus,
                      const std::map<std::string, std::string>& merge_map);

struct EvalOptions {
  bool gold_spans = false;  ///< score subtype resolution on ref boundaries
  std::optional<std::map<std::string, std::string>> merge;
};

struct ScoreReport {
  std::vector<PrfRow> rows;
  std::vector<PrfRow> baseline_rows;  ///< filled when a baseline hyp is given
  double ser = 0.0;
  std::size_t ref_slots = 0;
  /// (ref qualified label, hyp qualified label) -> count, over boundary-
  /// aligned pairs of subtype-bearing main types.
  std::map<std::pair<std::string, std::string>, std::size_t> confusion;
};

/// Per-label P/R/F rows plus overall SER. gold_spans rebuilds the hypothesis
/// on the reference span skeleton first (boundaries and main types copied;
/// an aligned same-main hypothesis span keeps its subtype, anything else
/// falls back to the schema default), isolating subtype resolution from
/// recognition errors.
ScoreReport evaluation_report(const Corpus& ref, const Corpus& hyp,
                              const EvalOptions& options,
                              const Corpus* baseline = nullptr);

/// Aligned plain-text table (label, #ref, P, R, F + SER); `tsv` selects the
/// machine-readable variant.
std::string render_report(const ScoreReport& report, bool tsv = false);

}  // namespace focale

#endif  // FOCALE_EVAL_HPP
