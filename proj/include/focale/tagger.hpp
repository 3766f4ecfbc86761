#ifndef FOCALE_TAGGER_HPP
#define FOCALE_TAGGER_HPP

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "focale/features.hpp"
#include "focale/induction.hpp"

namespace focale {

/// Shared read-only tagging context; safe to use from many threads.
struct TagContext {
  const LexiconSet* lex = nullptr;
  const TagSchema* schema = nullptr;
  std::vector<ChunkPattern> patterns;
  ContextWindow window;
};

/// The output representation: the surface form plus its stable type and the
/// contextual focalisation label.
struct EntityBundle {
  std::string lexical_unit;
  std::string sem_type;
  std::string focalisation;  ///< empty when the span carries no subtype
  std::size_t sentence_index = 0;
  AnnotatedSpan span;
  std::optional<Rule> fired_rule;
};

/// `Entity{ Lexical_unit=ONU; Sem{ Type=org; Focalisation=diplomatic_org; } }`
std::string render_bundle(const EntityBundle& bundle);

/// Base recognition: gazetteer longest matches become spans; a title trigger
/// followed by 1-3 consecutive PROPN tokens becomes a pers span. Existing
/// spans are discarded; gazetteer spans win on overlap.
Document recognize_entities(const Document& doc, const TagContext& ctx);

struct Resolution {
  std::string sub_type;
  const Rule* fired = nullptr;  ///< points into the RuleSet
};

/// First rule (in RuleSet order) whose whole conjunction is active in the
/// span's window decides; otherwise the schema default subtype. Throws
/// DomainError("NoSubtypeSchema") when the main type declares no subtypes.
Resolution resolve_subtype(const Document& doc, std::size_t sentence_index,
                           const AnnotatedSpan& span, const RuleSet& rules,
                           const TagContext& ctx);

/// recognize + resolve + bundle. Subtype resolution never changes span
/// boundaries or main types.
std::pair<Document, std::vector<EntityBundle>> tag_document(
    const Document& doc, const std::map<std::string, RuleSet>& rulesets,
    const TagContext& ctx);

/// Gold-span mode: keeps the document's own spans (boundaries + main types)
/// and only resolves subtypes.
std::pair<Document, std::vector<EntityBundle>> resolve_document(
    const Document& doc, const std::map<std::string, RuleSet>& rulesets,
    const TagContext& ctx);

/// recognize, then every subtype-bearing span gets the schema default.
/// Never consults rules.
Document baseline_tag(const Document& doc, const TagContext& ctx);

}  // namespace focale

#endif  // FOCALE_TAGGER_HPP
