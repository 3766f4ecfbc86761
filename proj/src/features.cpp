#include "focale/features.hpp"

#include <algorithm>

namespace focale {

std::string_view feature_kind_name(FeatureKind k) {
  switch (k) {
    case FeatureKind::Clust: return "CLUST";
    case FeatureKind::CoocNe: return "COOC_NE";
    case FeatureKind::FeelingNp: return "FEELING_NP";
    case FeatureKind::FinerLocCooc: return "FINER_LOC_COOC";
    case FeatureKind::Lemma: return "LEMMA";
    case FeatureKind::PosTag: return "POS";
    case FeatureKind::SubjOfHumanVerb: return "SUBJ_OF_HUMAN_VERB";
    case FeatureKind::Trig: return "TRIG";
    case FeatureKind::VclassGov: return "VCLASS_GOV";
  }
  return "CLUST";
}

std::optional<FeatureKind> feature_kind_from_name(std::string_view name) {
  static const std::pair<std::string_view, FeatureKind> kTable[] = {
      {"CLUST", FeatureKind::Clust},
      {"COOC_NE", FeatureKind::CoocNe},
      {"FEELING_NP", FeatureKind::FeelingNp},
      {"FINER_LOC_COOC", FeatureKind::FinerLocCooc},
      {"LEMMA", FeatureKind::Lemma},
      {"POS", FeatureKind::PosTag},
      {"SUBJ_OF_HUMAN_VERB", FeatureKind::SubjOfHumanVerb},
      {"TRIG", FeatureKind::Trig},
      {"VCLASS_GOV", FeatureKind::VclassGov}};
  for (const auto& [n, k] : kTable)
    if (n == name) return k;
  return std::nullopt;
}

std::string FeatureId::to_string() const {
  std::string out{feature_kind_name(kind)};
  if (!payload.empty()) {
    out.push_back(':');
    out += payload;
  }
  return out;
}

FeatureId FeatureId::parse(std::string_view txt) {
  const auto colon = txt.find(':');
  const auto name = txt.substr(0, colon);
  const auto kind = feature_kind_from_name(name);
  if (!kind)
    throw Error("BadFeature", "unknown feature kind '" + std::string(name) + "'");
  FeatureId id{*kind, {}};
  if (colon != std::string_view::npos) id.payload = txt.substr(colon + 1);
  return id;
}

namespace {

constexpr std::string_view kLeft = "left";
constexpr std::string_view kRight = "right";

bool ranges_intersect(std::size_t a0, std::size_t a1, std::size_t b0,
                      std::size_t b1) {
  return a0 <= b1 && b0 <= a1;
}

// In-window tokens on one side of the span, nearest first; crosses sentence
// boundaries when the window is not sentence-bounded.
struct WindowToken {
  const Token* token;
  bool left;
};

void collect_side(const Document& doc, std::size_t si, std::size_t edge,
                  bool left, const ContextWindow& window,
                  std::vector<WindowToken>& out) {
  std::size_t budget = window.radius;
  std::size_t s = si;
  long t = left ? static_cast<long>(edge) - 1 : static_cast<long>(edge) + 1;
  while (budget > 0) {
    const auto& toks = doc.sentences[s].tokens;
    if (t < 0 || t >= static_cast<long>(toks.size())) {
      if (window.sentence_bounded) break;
      if (left) {
        if (s == 0) break;
        --s;
        t = static_cast<long>(doc.sentences[s].tokens.size()) - 1;
      } else {
        if (s + 1 >= doc.sentences.size()) break;
        ++s;
        t = 0;
      }
      continue;
    }
    out.push_back({&doc.sentences[s].tokens[static_cast<std::size_t>(t)], left});
    --budget;
    t += left ? -1 : 1;
  }
}

}  // namespace

FeatureVector extract_features(const Document& doc, std::size_t sentence_index,
                               const AnnotatedSpan& span,
                               const ContextWindow& window,
                               const LexiconSet& lex,
                               std::span<const ChunkPattern> patterns) {
  if (sentence_index >= doc.sentences.size())
    throw DomainError("SpanOutOfRange",
                      "sentence " + std::to_string(sentence_index) +
                          " not in document " + doc.doc_id);
  const Sentence& sent = doc.sentences[sentence_index];
  if (span.first_token > span.last_token ||
      span.last_token >= sent.tokens.size())
    throw DomainError("SpanOutOfRange",
                      "span [" + std::to_string(span.first_token) + ".." +
                          std::to_string(span.last_token) + "] not in sentence");

  FeatureVector fv;
  fv.doc_id = doc.doc_id;
  fv.sentence_index = sentence_index;
  fv.first_token = span.first_token;
  fv.last_token = span.last_token;
  fv.main_type = span.main_type;
  fv.gold_subtype = span.sub_type;

  auto add = [&](FeatureKind kind, std::string payload) {
    fv.active.insert(FeatureId{kind, std::move(payload)});
  };

  // -- token-level features: LEMMA / POS with a side bucket, CLUST unbucketed
  std::vector<WindowToken> window_tokens;
  collect_side(doc, sentence_index, span.first_token, true, window,
               window_tokens);
  collect_side(doc, sentence_index, span.last_token, false, window,
               window_tokens);
  for (const WindowToken& wt : window_tokens) {
    const std::string bucket{wt.left ? kLeft : kRight};
    for (const MorphEntry& m : lex.lookup_morph(wt.token->surface)) {
      add(FeatureKind::PosTag, std::string(pos_name(m.pos)) + ":" + bucket);
      add(FeatureKind::Lemma, m.lemma + ":" + bucket);
      for (const std::string& cid : lex.lookup_cluster(m.lemma))
        add(FeatureKind::Clust, cid);
    }
  }

  // -- the structural slice: window plus the span itself, in-sentence.
  // Chunks and gazetteer matches are computed on this slice only, which makes
  // the locality property structural.
  const std::size_t w_lo =
      span.first_token >= window.radius ? span.first_token - window.radius : 0;
  const std::size_t w_hi =
      std::min(span.last_token + window.radius, sent.tokens.size() - 1);
  const std::vector<Token> slice(sent.tokens.begin() + static_cast<long>(w_lo),
                                 sent.tokens.begin() + static_cast<long>(w_hi) + 1);
  const std::vector<Pos> slice_pos = select_pos(slice, lex);
  const std::vector<Chunk> chunks = chunk_sentence(slice_pos, patterns);

  // span's own granularity; undeclared spans count as country-level
  std::vector<std::string> span_phrase;
  for (std::size_t t = span.first_token; t <= span.last_token; ++t)
    span_phrase.push_back(sent.tokens[t].surface);
  Granularity span_gran = Granularity::Country;
  if (const GazetteerEntry* self = lex.find_phrase(span_phrase);
      self && self->granularity)
    span_gran = *self->granularity;

  for (const GazetteerMatch& m : lex.match_gazetteer(slice)) {
    const std::size_t m_first = w_lo + m.first_token;
    const std::size_t m_last = w_lo + m.last_token;
    if (ranges_intersect(m_first, m_last, span.first_token, span.last_token))
      continue;
    if (m.entry->trigger_role != TriggerRole::None) {
      const std::string bucket{m_last < span.first_token ? kLeft : kRight};
      add(FeatureKind::Trig,
          std::string(trigger_role_name(m.entry->trigger_role)) + ":" + bucket);
    }
    if (m.entry->granularity && *m.entry->granularity < span_gran)
      add(FeatureKind::FinerLocCooc, {});
  }

  // -- subject-of-verb features: the NP holding the span, followed
  // immediately by a VP; every VERB token of that VP contributes its frames.
  const std::size_t span_first_slice = span.first_token - w_lo;
  const Chunk* gov_np = nullptr;
  for (const Chunk& c : chunks)
    if (c.kind == ChunkKind::NP && c.first_token <= span_first_slice &&
        span_first_slice <= c.last_token)
      gov_np = &c;
  if (gov_np) {
    for (const Chunk& c : chunks) {
      if (c.kind != ChunkKind::VP || c.first_token != gov_np->last_token + 1)
        continue;
      for (std::size_t t = c.first_token; t <= c.last_token; ++t) {
        if (slice_pos[t] != Pos::Verb) continue;
        for (const MorphEntry& m : lex.lookup_morph(slice[t].surface)) {
          if (m.pos != Pos::Verb) continue;
          if (auto frame = lex.lookup_verb_frame(m.lemma)) {
            if (frame->subject_restriction == SubjectRestriction::Human)
              add(FeatureKind::SubjOfHumanVerb, {});
            if (frame->verb_class)
              add(FeatureKind::VclassGov, *frame->verb_class);
          }
        }
      }
    }
  }

  // -- noun phrases whose head lemma sits in the "feeling" cluster
  for (const Chunk& c : chunks) {
    if (c.kind != ChunkKind::NP) continue;
    const std::size_t head_sent = w_lo + c.head;
    if (ranges_intersect(head_sent, head_sent, span.first_token,
                         span.last_token))
      continue;
    for (const MorphEntry& m : lex.lookup_morph(slice[c.head].surface))
      if (lex.lemma_has_cluster_label(m.lemma, "feeling"))
        add(FeatureKind::FeelingNp, {});
  }

  // -- co-occurring entity annotations inside the window
  for (const AnnotatedSpan& other : sent.spans) {
    if (other.first_token == span.first_token &&
        other.last_token == span.last_token)
      continue;
    if (ranges_intersect(other.first_token, other.last_token, w_lo, w_hi))
      add(FeatureKind::CoocNe, other.main_type);
  }

  return fv;
}

Vocabulary build_vocabulary(std::span<const FeatureVector> vectors) {
  Vocabulary vocab;
  std::set<FeatureId> seen;
  for (const FeatureVector& v : vectors)
    seen.insert(v.active.begin(), v.active.end());
  vocab.features.assign(seen.begin(), seen.end());
  for (std::size_t i = 0; i < vocab.features.size(); ++i)
    vocab.index_of.emplace(vocab.features[i], i);
  return vocab;
}

}  // namespace focale
