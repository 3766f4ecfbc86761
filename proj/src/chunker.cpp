#include "focale/chunker.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "focale/text.hpp"

namespace focale {

std::string_view chunk_kind_name(ChunkKind k) {
  switch (k) {
    case ChunkKind::NP: return "NP";
    case ChunkKind::VP: return "VP";
    case ChunkKind::PP: return "PP";
  }
  return "NP";
}

std::optional<ChunkKind> chunk_kind_from_name(std::string_view name) {
  if (name == "NP") return ChunkKind::NP;
  if (name == "VP") return ChunkKind::VP;
  if (name == "PP") return ChunkKind::PP;
  return std::nullopt;
}

ChunkPattern compile_pattern(ChunkKind kind, std::string_view pattern_text) {
  ChunkPattern out;
  out.kind = kind;
  std::size_t i = 0;
  const std::size_t n = pattern_text.size();

  auto skip_ws = [&] {
    while (i < n && pattern_text[i] == ' ') ++i;
  };
  auto read_pos = [&]() -> Pos {
    const std::size_t start = i;
    while (i < n && (std::isalpha(static_cast<unsigned char>(pattern_text[i])) ||
                     pattern_text[i] == '_'))
      ++i;
    const auto name = pattern_text.substr(start, i - start);
    const auto pos = pos_from_name(name);
    if (!pos)
      throw ParseError("PatternSyntax", start,
                       "unknown POS label '" + std::string(name) + "'");
    return *pos;
  };

  skip_ws();
  while (i < n) {
    PatternElem elem;
    if (pattern_text[i] == '(') {
      ++i;
      while (true) {
        skip_ws();
        if (i >= n)
          throw ParseError("PatternSyntax", i, "unterminated group");
        elem.alternatives.push_back(read_pos());
        skip_ws();
        if (i < n && pattern_text[i] == '|') {
          ++i;
          continue;
        }
        if (i < n && pattern_text[i] == ')') {
          ++i;
          break;
        }
        throw ParseError("PatternSyntax", i, "expected '|' or ')'");
      }
    } else if (std::isalpha(static_cast<unsigned char>(pattern_text[i]))) {
      elem.alternatives.push_back(read_pos());
    } else {
      throw ParseError("PatternSyntax", i,
                       std::string("unexpected character '") +
                           pattern_text[i] + "'");
    }
    if (i < n && (pattern_text[i] == '?' || pattern_text[i] == '*' ||
                  pattern_text[i] == '+')) {
      elem.quant = pattern_text[i] == '?'   ? PatternElem::Quant::Optional
                   : pattern_text[i] == '*' ? PatternElem::Quant::Star
                                            : PatternElem::Quant::Plus;
      ++i;
    }
    if (i < n && pattern_text[i] != ' ')
      throw ParseError("PatternSyntax", i,
                       std::string("unexpected character '") +
                           pattern_text[i] + "'");
    out.elems.push_back(std::move(elem));
    skip_ws();
  }
  if (out.elems.empty())
    throw ParseError("PatternSyntax", 0, "empty pattern");
  return out;
}

std::vector<ChunkPattern> parse_patterns(std::string_view txt) {
  std::vector<ChunkPattern> out;
  std::istringstream in{std::string(txt)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto cols = text::split_fields(line, '\t');
    if (cols.size() != 2)
      throw ParseError("MalformedRow", line_no,
                       "pattern line needs KIND<TAB>pattern");
    const auto kind = chunk_kind_from_name(cols[0]);
    if (!kind)
      throw ParseError("MalformedRow", line_no,
                       "unknown chunk kind '" + cols[0] + "'");
    out.push_back(compile_pattern(*kind, cols[1]));
  }
  return out;
}

std::vector<ChunkPattern> load_patterns(const std::string& path) {
  return parse_patterns(read_file(path));
}

namespace {

// Fixed priority for picking one analysis; lower rank wins.
int pos_rank(Pos p) {
  switch (p) {
    case Pos::Noun: return 0;
    case Pos::Verb: return 1;
    case Pos::Adj: return 2;
    case Pos::Det: return 3;
    case Pos::Prep: return 4;
    case Pos::Pron: return 5;
    case Pos::Adv: return 6;
    case Pos::Propn: return 7;
    case Pos::Unk: return 8;
    case Pos::Punc: return 9;
  }
  return 9;
}

bool elem_matches(const PatternElem& e, Pos p) {
  return std::find(e.alternatives.begin(), e.alternatives.end(), p) !=
         e.alternatives.end();
}

// Longest end position (exclusive) such that elems[ei..] matches
// pos[at..end); -1 when no match.
long match_longest(const std::vector<PatternElem>& elems, std::size_t ei,
                   std::span<const Pos> pos, std::size_t at) {
  if (ei == elems.size()) return static_cast<long>(at);
  const PatternElem& e = elems[ei];
  long best = -1;
  const bool may_skip = e.quant == PatternElem::Quant::Optional ||
                        e.quant == PatternElem::Quant::Star;
  const bool may_repeat = e.quant == PatternElem::Quant::Star ||
                          e.quant == PatternElem::Quant::Plus;
  if (may_skip) best = match_longest(elems, ei + 1, pos, at);
  std::size_t k = at;
  while (k < pos.size() && elem_matches(e, pos[k])) {
    ++k;
    best = std::max(best, match_longest(elems, ei + 1, pos, k));
    if (!may_repeat) break;
  }
  return best;
}

}  // namespace

std::vector<Pos> select_pos(const std::vector<Token>& tokens,
                            const LexiconSet& lex) {
  std::vector<Pos> out;
  out.reserve(tokens.size());
  for (const Token& t : tokens) {
    if (text::all_punct(t.surface)) {
      out.push_back(Pos::Punc);
      continue;
    }
    Pos best = Pos::Unk;
    int best_rank = pos_rank(Pos::Punc) + 1;
    for (const MorphEntry& e : lex.lookup_morph(t.surface)) {
      const int r = pos_rank(e.pos);
      if (r < best_rank) {
        best_rank = r;
        best = e.pos;
      }
    }
    out.push_back(best);
  }
  return out;
}

std::vector<Chunk> chunk_sentence(std::span<const Pos> pos,
                                  std::span<const ChunkPattern> patterns) {
  std::vector<Chunk> out;
  std::size_t i = 0;
  while (i < pos.size()) {
    long end = -1;
    const ChunkPattern* matched = nullptr;
    for (const ChunkPattern& p : patterns) {
      end = match_longest(p.elems, 0, pos, i);
      if (end > static_cast<long>(i)) {  // non-empty match only
        matched = &p;
        break;
      }
    }
    if (matched) {
      Chunk c{matched->kind, i, static_cast<std::size_t>(end) - 1, i};
      c.head = chunk_head(c, pos);
      out.push_back(c);
      i = static_cast<std::size_t>(end);
    } else {
      ++i;
    }
  }
  return out;
}

std::size_t chunk_head(const Chunk& chunk, std::span<const Pos> pos) {
  if (chunk.kind == ChunkKind::VP) {
    for (std::size_t t = chunk.first_token; t <= chunk.last_token; ++t)
      if (pos[t] == Pos::Verb) return t;
  } else {
    for (std::size_t t = chunk.last_token + 1; t-- > chunk.first_token;)
      if (pos[t] == Pos::Noun || pos[t] == Pos::Propn) return t;
  }
  return chunk.last_token;
}

}  // namespace focale
