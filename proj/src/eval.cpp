#include "focale/eval.hpp"

#include <algorithm>
#include <cstdio>
#include <set>
#include <sstream>

namespace focale {

std::string_view match_status_name(MatchStatus s) {
  switch (s) {
    case MatchStatus::Correct: return "correct";
    case MatchStatus::TypeSubstitution: return "type_substitution";
    case MatchStatus::Deletion: return "deletion";
    case MatchStatus::Insertion: return "insertion";
  }
  return "correct";
}

std::vector<SlotMatch> align_slots(const Document& ref, const Document& hyp) {
  if (ref.doc_id != hyp.doc_id)
    throw Error("TokenMismatch", "document ids differ: " + ref.doc_id +
                                     " vs " + hyp.doc_id);
  if (ref.sentences.size() != hyp.sentences.size())
    throw Error("TokenMismatch", "sentence counts differ in " + ref.doc_id);
  for (std::size_t si = 0; si < ref.sentences.size(); ++si) {
    const auto& rt = ref.sentences[si].tokens;
    const auto& ht = hyp.sentences[si].tokens;
    if (rt.size() != ht.size())
      throw Error("TokenMismatch", "token counts differ in " + ref.doc_id +
                                       " sentence " + std::to_string(si));
    for (std::size_t ti = 0; ti < rt.size(); ++ti)
      if (rt[ti].surface != ht[ti].surface)
        throw Error("TokenMismatch", "token surfaces differ in " + ref.doc_id +
                                         " sentence " + std::to_string(si));
  }

  std::vector<SlotMatch> out;
  for (std::size_t si = 0; si < ref.sentences.size(); ++si) {
    const auto& rspans = ref.sentences[si].spans;
    const auto& hspans = hyp.sentences[si].spans;
    std::vector<bool> hyp_used(hspans.size(), false);
    for (const AnnotatedSpan& r : rspans) {
      std::size_t match = hspans.size();
      for (std::size_t hi = 0; hi < hspans.size(); ++hi)
        if (!hyp_used[hi] && hspans[hi].first_token == r.first_token &&
            hspans[hi].last_token == r.last_token) {
          match = hi;
          break;
        }
      if (match == hspans.size()) {
        out.push_back({MatchStatus::Deletion, ref.doc_id, si, r, std::nullopt});
        continue;
      }
      hyp_used[match] = true;
      const AnnotatedSpan& h = hspans[match];
      if (r.main_type != h.main_type) {
        // stricter reading: a main-type clash is two errors
        out.push_back({MatchStatus::Deletion, ref.doc_id, si, r, std::nullopt});
        out.push_back({MatchStatus::Insertion, ref.doc_id, si, std::nullopt, h});
      } else if (r.sub_type == h.sub_type) {
        out.push_back({MatchStatus::Correct, ref.doc_id, si, r, h});
      } else {
        out.push_back({MatchStatus::TypeSubstitution, ref.doc_id, si, r, h});
      }
    }
    for (std::size_t hi = 0; hi < hspans.size(); ++hi)
      if (!hyp_used[hi])
        out.push_back(
            {MatchStatus::Insertion, ref.doc_id, si, std::nullopt, hspans[hi]});
  }
  return out;
}

std::vector<SlotMatch> align_corpora(const Corpus& ref, const Corpus& hyp) {
  std::map<std::string, const Document*> hyp_docs;
  for (const Document& d : hyp.documents) hyp_docs[d.doc_id] = &d;
  if (hyp_docs.size() != ref.documents.size())
    throw Error("TokenMismatch", "corpora hold different document sets");
  std::vector<SlotMatch> out;
  for (const Document& r : ref.documents) {
    auto it = hyp_docs.find(r.doc_id);
    if (it == hyp_docs.end())
      throw Error("TokenMismatch", "document " + r.doc_id + " missing from hyp");
    auto m = align_slots(r, *it->second);
    out.insert(out.end(), m.begin(), m.end());
  }
  return out;
}

double slot_error_rate(std::span<const SlotMatch> matches) {
  std::size_t ref_count = 0;
  std::size_t errors = 0;
  for (const SlotMatch& m : matches) {
    switch (m.status) {
      case MatchStatus::Correct:
        ++ref_count;
        break;
      case MatchStatus::TypeSubstitution:
        ++ref_count;
        ++errors;
        break;
      case MatchStatus::Deletion:
        ++ref_count;
        ++errors;
        break;
      case MatchStatus::Insertion:
        ++errors;
        break;
    }
  }
  if (ref_count == 0)
    throw Error("EmptyReference", "no reference slots to score against");
  return static_cast<double>(errors) / static_cast<double>(ref_count);
}

double f_measure(double precision, double recall) {
  const double sum = precision + recall;
  return sum > 0.0 ? 2.0 * precision * recall / sum : 0.0;
}

PrfRow score_prf(std::span<const SlotMatch> matches, std::string_view label) {
  std::size_t ref_count = 0;
  std::size_t hyp_count = 0;
  std::size_t correct = 0;
  for (const SlotMatch& m : matches) {
    const bool ref_has = m.ref && m.ref->qualified_label() == label;
    const bool hyp_has = m.hyp && m.hyp->qualified_label() == label;
    if (ref_has) ++ref_count;
    if (hyp_has) ++hyp_count;
    if (m.status == MatchStatus::Correct && ref_has) ++correct;
  }
  PrfRow row;
  row.label = std::string(label);
  row.ref_count = ref_count;
  if (hyp_count == 0 || ref_count == 0) row.undefined = true;
  row.precision = hyp_count > 0
                      ? static_cast<double>(correct) / static_cast<double>(hyp_count)
                      : 0.0;
  row.recall = ref_count > 0
                   ? static_cast<double>(correct) / static_cast<double>(ref_count)
                   : 0.0;
  row.f_measure = f_measure(row.precision, row.recall);
  return row;
}

Document merge_subtypes(const Document& doc,
                        const std::map<std::string, std::string>& merge_map,
                        const TagSchema& schema) {
  // validate targets once
  for (const auto& [from, to] : merge_map) {
    const auto dot = to.find('.');
    if (dot == std::string::npos || !schema.has_sub(to.substr(0, dot), to.substr(dot + 1)))
      throw Error("UnknownLabel", "merge target '" + to + "' not in schema");
    (void)from;
  }
  Document out = doc;
  for (Sentence& sent : out.sentences) {
    for (AnnotatedSpan& span : sent.spans) {
      auto it = merge_map.find(span.qualified_label());
      if (it == merge_map.end()) continue;
      const std::string& to = it->second;
      const auto dot = to.find('.');
      span.main_type = to.substr(0, dot);
      span.sub_type = to.substr(dot + 1);
    }
  }
  return out;
}

Corpus merge_subtypes(const Corpus& corpus,
                      const std::map<std::string, std::string>& merge_map) {
  Corpus out{{}, corpus.schema};
  out.documents.reserve(corpus.documents.size());
  for (const Document& d : corpus.documents)
    out.documents.push_back(merge_subtypes(d, merge_map, corpus.schema));
  return out;
}

namespace {

// Rebuilds hyp on ref's span skeleton: ref boundaries and main types; the
// subtype comes from an exactly aligned same-main hyp span when present,
// else the schema default. Extra hyp spans are dropped.
Document project_gold_spans(const Document& ref, const Document& hyp,
                            const TagSchema& schema) {
  Document out = hyp;
  for (std::size_t si = 0; si < ref.sentences.size(); ++si) {
    const auto& rspans = ref.sentences[si].spans;
    const auto& hspans = hyp.sentences[si].spans;
    std::vector<AnnotatedSpan> projected;
    projected.reserve(rspans.size());
    for (const AnnotatedSpan& r : rspans) {
      AnnotatedSpan p = r;
      p.sub_type.reset();
      if (schema.has_subtypes(r.main_type))
        p.sub_type = schema.default_subtype.at(r.main_type);
      for (const AnnotatedSpan& h : hspans)
        if (h.first_token == r.first_token && h.last_token == r.last_token &&
            h.main_type == r.main_type) {
          p.sub_type = h.sub_type;
          break;
        }
      projected.push_back(std::move(p));
    }
    out.sentences[si].spans = std::move(projected);
  }
  return out;
}

Corpus project_gold_spans(const Corpus& ref, const Corpus& hyp) {
  std::map<std::string, const Document*> hyp_docs;
  for (const Document& d : hyp.documents) hyp_docs[d.doc_id] = &d;
  Corpus out{{}, hyp.schema};
  for (const Document& r : ref.documents) {
    auto it = hyp_docs.find(r.doc_id);
    if (it == hyp_docs.end())
      throw Error("TokenMismatch", "document " + r.doc_id + " missing from hyp");
    out.documents.push_back(project_gold_spans(r, *it->second, hyp.schema));
  }
  return out;
}

std::vector<PrfRow> label_rows(const std::vector<SlotMatch>& matches) {
  std::set<std::string> labels;
  for (const SlotMatch& m : matches) {
    if (m.ref) labels.insert(m.ref->qualified_label());
    if (m.hyp) labels.insert(m.hyp->qualified_label());
  }
  std::vector<PrfRow> rows;
  rows.reserve(labels.size());
  for (const std::string& label : labels)
    rows.push_back(score_prf(matches, label));
  return rows;
}

}  // namespace

ScoreReport evaluation_report(const Corpus& ref, const Corpus& hyp,
                              const EvalOptions& options,
                              const Corpus* baseline) {
  Corpus ref_eval = ref;
  Corpus hyp_eval = options.gold_spans ? project_gold_spans(ref, hyp) : hyp;
  std::optional<Corpus> base_eval;
  if (baseline)
    base_eval = options.gold_spans ? project_gold_spans(ref, *baseline)
                                   : *baseline;
  if (options.merge) {
    ref_eval = merge_subtypes(ref_eval, *options.merge);
    hyp_eval = merge_subtypes(hyp_eval, *options.merge);
    if (base_eval) base_eval = merge_subtypes(*base_eval, *options.merge);
  }

  const auto matches = align_corpora(ref_eval, hyp_eval);

  ScoreReport report;
  report.rows = label_rows(matches);
  report.ser = slot_error_rate(matches);
  for (const SlotMatch& m : matches)
    if (m.status != MatchStatus::Insertion) ++report.ref_slots;
  for (const SlotMatch& m : matches) {
    if (!m.ref || !m.hyp) continue;  // paired entries only
    if (!ref_eval.schema.has_subtypes(m.ref->main_type)) continue;
    ++report.confusion[{m.ref->qualified_label(), m.hyp->qualified_label()}];
  }
  if (base_eval) {
    const auto base_matches = align_corpora(ref_eval, *base_eval);
    report.baseline_rows = label_rows(base_matches);
  }
  return report;
}

std::string render_report(const ScoreReport& report, bool tsv) {
  std::ostringstream out;
  char buf[128];
  if (tsv) {
    out << "label\tref\tprecision\trecall\tf_measure\n";
    for (const PrfRow& r : report.rows) {
      std::snprintf(buf, sizeof buf, "%s\t%zu\t%.4f\t%.4f\t%.4f\n",
                    r.label.c_str(), r.ref_count, r.precision, r.recall,
                    r.f_measure);
      out << buf;
    }
    for (const PrfRow& r : report.baseline_rows) {
      std::snprintf(buf, sizeof buf, "baseline:%s\t%zu\t%.4f\t%.4f\t%.4f\n",
                    r.label.c_str(), r.ref_count, r.precision, r.recall,
                    r.f_measure);
      out << buf;
    }
    std::snprintf(buf, sizeof buf, "SER\t%.4f\n", report.ser);
    out << buf;
    return out.str();
  }

  std::size_t width = 5;
  for (const PrfRow& r : report.rows) width = std::max(width, r.label.size());
  for (const PrfRow& r : report.baseline_rows)
    width = std::max(width, r.label.size());
  auto emit_row = [&](const PrfRow& r) {
    std::snprintf(buf, sizeof buf, "%-*s %7zu  %6.4f  %6.4f  %6.4f%s\n",
                  static_cast<int>(width), r.label.c_str(), r.ref_count,
                  r.precision, r.recall, r.f_measure,
                  r.undefined ? "  (undefined)" : "");
    out << buf;
  };
  std::snprintf(buf, sizeof buf, "%-*s %7s  %6s  %6s  %6s\n",
                static_cast<int>(width), "label", "#ref", "P", "R", "F");
  out << buf;
  for (const PrfRow& r : report.rows) emit_row(r);
  if (!report.baseline_rows.empty()) {
    out << "baseline\n";
    for (const PrfRow& r : report.baseline_rows) emit_row(r);
  }
  if (!report.confusion.empty()) {
    out << "confusion (ref -> hyp)\n";
    for (const auto& [pair, count] : report.confusion)
      out << "  " << pair.first << " -> " << pair.second << "  " << count
          << "\n";
  }
  std::snprintf(buf, sizeof buf, "SER %.4f\n", report.ser);
  out << buf;
  return out.str();
}

}  // namespace focale
