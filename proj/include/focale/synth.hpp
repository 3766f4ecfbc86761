#ifndef FOCALE_SYNTH_HPP
#define FOCALE_SYNTH_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "focale/corpus.hpp"

namespace focale {

/// Synthetic corpus generator parameters. The default subtype distribution
/// mirrors the class imbalance of a broadcast-news gsp evaluation set
/// (1486 : 7 : 385).
struct GeneratorSpec {
  std::uint64_t seed = 42;
  std::size_t n_sentences = 1000;
  /// qualified subtype label ("gsp.loc") -> weight; normalized at generation
  std::vector<std::pair<std::string, double>> subtype_distribution = {
      {"gsp.loc", 1486.0}, {"gsp.pers", 7.0}, {"gsp.org", 385.0}};
  /// probability that the sentence carries its subtype's characteristic cue;
  /// otherwise a neutral frame is used instead
  double cue_reliability = 0.9;
  std::size_t sentences_per_doc = 25;
  std::string templates_path;  ///< empty = built-in template set
};

/// One sentence template: the qualified subtype it realizes, its text with
/// {NE} and {CUE} placeholders, and the characteristic cue text.
struct SentenceTemplate {
  std::string main_type;
  std::string sub_type;
  std::string template_text;
  std::string cue;
};

/// Template file: `subtype<TAB>template<TAB>cue`; duplicate rows are kept
/// (repetition weights the uniform template choice).
std::vector<SentenceTemplate> parse_templates(std::string_view text);
std::vector<SentenceTemplate> load_templates(const std::string& path);

/// `key = value` lines: seed, sentences, cue_reliability, sentences_per_doc,
/// templates, plus repeated `dist = <label> <weight>` lines.
GeneratorSpec parse_generator_spec(std::string_view text);
GeneratorSpec load_generator_spec(const std::string& path);

/// Deterministic for a fixed seed. Every sentence instantiates a template of
/// a sampled subtype; gold annotations are attached. Throws
/// Error("BadTemplate") on malformed templates or labels missing from the
/// schema.
Corpus generate(const GeneratorSpec& spec,
                std::span<const SentenceTemplate> templates,
                const TagSchema& schema);

}  // namespace focale

#endif  // FOCALE_SYNTH_HPP
