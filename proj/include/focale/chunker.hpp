#ifndef FOCALE_CHUNKER_HPP
#define FOCALE_CHUNKER_HPP

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "focale/lexicon.hpp"

namespace focale {

enum class ChunkKind { NP, VP, PP };

std::string_view chunk_kind_name(ChunkKind k);
std::optional<ChunkKind> chunk_kind_from_name(std::string_view name);

/// One pattern element: a POS alternative set with a quantifier.
struct PatternElem {
  enum class Quant { One, Optional, Star, Plus };
  std::vector<Pos> alternatives;
  Quant quant = Quant::One;
};

struct ChunkPattern {
  ChunkKind kind = ChunkKind::NP;
  std::vector<PatternElem> elems;
};

/// Non-recursive phrase over sentence-local token indices (inclusive).
struct Chunk {
  ChunkKind kind;
  std::size_t first_token;
  std::size_t last_token;
  std::size_t head;
};

/// Compiles `POS[?*+]?` elements, with `(POS|POS|...)` alternation groups.
/// Throws ParseError("PatternSyntax", position).
ChunkPattern compile_pattern(ChunkKind kind, std::string_view pattern_text);

/// Pattern file: lines `KIND<TAB>pattern`; `#` comments. Order matters.
std::vector<ChunkPattern> parse_patterns(std::string_view text);
std::vector<ChunkPattern> load_patterns(const std::string& path);

/// One POS per token: all-punctuation surfaces get PUNC, otherwise the morph
/// analysis whose POS ranks first in the fixed priority order
/// NOUN < VERB < ADJ < DET < PREP < PRON < ADV < PROPN < UNK.
std::vector<Pos> select_pos(const std::vector<Token>& tokens,
                            const LexiconSet& lex);

/// Left-to-right scan: at each position, the first pattern that matches is
/// taken at its longest extent and its tokens consumed. Unmatched tokens stay
/// outside every chunk.
std::vector<Chunk> chunk_sentence(std::span<const Pos> pos,
                                  std::span<const ChunkPattern> patterns);

/// NP/PP head = rightmost NOUN-or-PROPN token; VP head = leftmost VERB;
/// falls back to the last token.
std::size_t chunk_head(const Chunk& chunk, std::span<const Pos> pos);

}  // namespace focale

#endif  // FOCALE_CHUNKER_HPP
