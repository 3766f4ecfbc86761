#include "focale/tagger.hpp"

#include <algorithm>

namespace focale {

std::string render_bundle(const EntityBundle& b) {
  std::string foc = b.focalisation.empty() ? "-" : b.focalisation;
  return "Entity{ Lexical_unit=" + b.lexical_unit + "; Sem{ Type=" +
         b.sem_type + "; Focalisation=" + foc + "; } }";
}

namespace {

bool overlaps_any(const std::vector<AnnotatedSpan>& spans, std::size_t first,
                  std::size_t last) {
  for (const AnnotatedSpan& s : spans)
    if (s.first_token <= last && first <= s.last_token) return true;
  return false;
}

std::string span_surface(const Sentence& sent, const AnnotatedSpan& span) {
  std::string out;
  for (std::size_t t = span.first_token; t <= span.last_token; ++t) {
    if (t > span.first_token) out.push_back(' ');
    out += sent.tokens[t].surface;
  }
  return out;
}

}  // namespace

Document recognize_entities(const Document& doc, const TagContext& ctx) {
  Document out = doc;
  for (Sentence& sent : out.sentences) {
    sent.spans.clear();
    const auto matches = ctx.lex->match_gazetteer(sent);
    // gazetteer entities first; they win any overlap
    for (const GazetteerMatch& m : matches) {
      if (m.entry->trigger_role != TriggerRole::None) continue;
      if (!ctx.schema->has_main(m.entry->category)) continue;
      AnnotatedSpan span;
      span.first_token = m.first_token;
      span.last_token = m.last_token;
      span.main_type = m.entry->category;
      sent.spans.push_back(std::move(span));
    }
    // a title trigger followed by 1-3 consecutive PROPN tokens
    const auto pos = select_pos(sent.tokens, *ctx.lex);
    for (const GazetteerMatch& m : matches) {
      if (m.entry->trigger_role != TriggerRole::Title) continue;
      std::size_t first = m.last_token + 1;
      std::size_t run = 0;
      while (first + run < sent.tokens.size() && run < 3 &&
             pos[first + run] == Pos::Propn)
        ++run;
      if (run == 0) continue;
      if (overlaps_any(sent.spans, first, first + run - 1)) continue;
      AnnotatedSpan span;
      span.first_token = first;
      span.last_token = first + run - 1;
      span.main_type = "pers";
      if (!ctx.schema->has_main("pers")) continue;
      sent.spans.push_back(std::move(span));
    }
    std::sort(sent.spans.begin(), sent.spans.end(),
              [](const AnnotatedSpan& a, const AnnotatedSpan& b) {
                return a.first_token < b.first_token;
              });
  }
  return out;
}

Resolution resolve_subtype(const Document& doc, std::size_t sentence_index,
                           const AnnotatedSpan& span, const RuleSet& rules,
                           const TagContext& ctx) {
  if (!ctx.schema->has_subtypes(span.main_type))
    throw DomainError("NoSubtypeSchema",
                      "main type " + span.main_type + " declares no subtypes");
  if (rules.main_type != span.main_type)
    throw DomainError("NoSubtypeSchema",
                      "rule set for " + rules.main_type +
                          " applied to a " + span.main_type + " span");

  const FeatureVector fv = extract_features(doc, sentence_index, span,
                                            ctx.window, *ctx.lex, ctx.patterns);
  for (const Rule& rule : rules.rules) {
    bool all = true;
    for (const FeatureId& f : rule.features)
      if (!fv.active.count(f)) {
        all = false;
        break;
      }
    if (all) return {rule.target, &rule};
  }
  return {ctx.schema->default_subtype.at(span.main_type), nullptr};
}

namespace {

std::pair<Document, std::vector<EntityBundle>> resolve_all(
    Document doc, const std::map<std::string, RuleSet>& rulesets,
    const TagContext& ctx) {
  std::vector<EntityBundle> bundles;
  for (std::size_t si = 0; si < doc.sentences.size(); ++si) {
    Sentence& sent = doc.sentences[si];
    for (AnnotatedSpan& span : sent.spans) {
      EntityBundle bundle;
      bundle.sentence_index = si;
      bundle.sem_type = span.main_type;
      bundle.lexical_unit = span_surface(sent, span);
      if (ctx.schema->has_subtypes(span.main_type)) {
        RuleSet no_rules;
        const RuleSet* rules = &no_rules;
        if (auto it = rulesets.find(span.main_type); it != rulesets.end())
          rules = &it->second;
        else
          no_rules.main_type = span.main_type;
        const Resolution res = resolve_subtype(doc, si, span, *rules, ctx);
        span.sub_type = res.sub_type;
        bundle.focalisation =
            ctx.schema->focalisation(span.main_type, res.sub_type);
        if (res.fired) bundle.fired_rule = *res.fired;
      }
      bundle.span = span;
      bundles.push_back(std::move(bundle));
    }
  }
  return {std::move(doc), std::move(bundles)};
}

}  // namespace

std::pair<Document, std::vector<EntityBundle>> tag_document(
    const Document& doc, const std::map<std::string, RuleSet>& rulesets,
    const TagContext& ctx) {
  return resolve_all(recognize_entities(doc, ctx), rulesets, ctx);
}

std::pair<Document, std::vector<EntityBundle>> resolve_document(
    const Document& doc, const std::map<std::string, RuleSet>& rulesets,
    const TagContext& ctx) {
  return resolve_all(doc, rulesets, ctx);
}

Document baseline_tag(const Document& doc, const TagContext& ctx) {
  Document out = recognize_entities(doc, ctx);
  for (Sentence& sent : out.sentences)
    for (AnnotatedSpan& span : sent.spans)
      if (ctx.schema->has_subtypes(span.main_type))
        span.sub_type = ctx.schema->default_subtype.at(span.main_type);
  return out;
}

}  // namespace focale
