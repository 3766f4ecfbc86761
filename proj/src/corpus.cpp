#include "focale/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "focale/text.hpp"

namespace focale {

namespace {

using text::CodePoint;

// Elision clitics split off with their apostrophe: l' d' qu' n' s' j' m' t' c'
bool is_elision_stem(const std::u32string& w) {
  static const std::u32string kStems[] = {U"l", U"d", U"qu", U"n", U"s",
                                          U"j", U"m", U"t",  U"c"};
  std::u32string lower;
  lower.reserve(w.size());
  for (char32_t c : w) lower.push_back(text::to_lower(c));
  for (const auto& s : kStems)
    if (lower == s) return true;
  return false;
}

bool is_terminal_punct(char32_t cp) {
  return cp == U'.' || cp == U'!' || cp == U'?';
}

struct FlatToken {
  std::string surface;
  std::size_t char_start;
  std::size_t char_end;
  bool sentence_final;  // a sentence break follows this token
};

// Single pass over code points: emits tokens and marks sentence breaks.
std::vector<FlatToken> scan_tokens(const std::vector<CodePoint>& cps,
                                   std::string_view raw) {
  std::vector<FlatToken> out;
  const std::size_t n = cps.size();

  auto push = [&](std::size_t first_cp, std::size_t last_cp) {
    const std::size_t b0 = cps[first_cp].byte_start;
    const std::size_t b1 = cps[last_cp].byte_end;
    out.push_back({std::string(raw.substr(b0, b1 - b0)), first_cp, last_cp + 1,
                   false});
  };

  // True when a terminal punctuation at cp index i ends a sentence:
  // whitespace then a capital follows, or only whitespace remains.
  auto breaks_sentence = [&](std::size_t i) {
    std::size_t j = i + 1;
    if (j < n && !text::is_space(cps[j].value)) return false;
    while (j < n && text::is_space(cps[j].value)) ++j;
    if (j == n) return true;
    return text::is_upper(cps[j].value);
  };

  std::size_t i = 0;
  while (i < n) {
    if (text::is_space(cps[i].value)) {
      ++i;
      continue;
    }
    // Non-space run; cut punctuation and elision prefixes inside it.
    std::size_t word_start = i;
    std::u32string word;
    auto flush_word = [&](std::size_t end_cp_exclusive) {
      if (!word.empty()) {
        push(word_start, end_cp_exclusive - 1);
        word.clear();
      }
    };
    while (i < n && !text::is_space(cps[i].value)) {
      const char32_t c = cps[i].value;
      if (text::is_punct(c)) {
        flush_word(i);
        push(i, i);
        if (is_terminal_punct(c) && breaks_sentence(i))
          out.back().sentence_final = true;
        ++i;
        word_start = i;
      } else if (text::is_apostrophe(c) && !word.empty() &&
                 is_elision_stem(word)) {
        push(word_start, i);  // stem + apostrophe as one token
        word.clear();
        ++i;
        word_start = i;
      } else {
        if (word.empty()) word_start = i;
        word.push_back(c);
        ++i;
      }
    }
    flush_word(i);
  }
  if (!out.empty()) out.back().sentence_final = true;
  return out;
}

std::vector<Sentence> group_sentences(const std::vector<FlatToken>& flat) {
  std::vector<Sentence> sentences;
  Sentence current;
  for (const auto& t : flat) {
    Token tok;
    tok.surface = t.surface;
    tok.char_start = t.char_start;
    tok.char_end = t.char_end;
    tok.sent_index = current.tokens.size();
    current.tokens.push_back(std::move(tok));
    if (t.sentence_final) {
      sentences.push_back(std::move(current));
      current = Sentence{};
    }
  }
  if (!current.tokens.empty()) sentences.push_back(std::move(current));
  return sentences;
}

}  // namespace

std::vector<Sentence> tokenize(std::string_view raw) {
  const auto cps = text::decode_utf8(raw);
  return group_sentences(scan_tokens(cps, raw));
}

// ---------------------------------------------------------------------------
// TagSchema

TagSchema TagSchema::parse(std::string_view txt) {
  TagSchema schema;
  std::size_t line_no = 0;
  std::istringstream in{std::string(txt)};
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string trimmed = text::trim(line);
    if (trimmed.empty() || trimmed[0] == '#') continue;
    std::istringstream ls(trimmed);
    std::string kw;
    ls >> kw;
    if (kw == "main") {
      std::string label;
      if (!(ls >> label))
        throw ParseError("MalformedRow", line_no, "main needs a label");
      schema.main_types.insert(label);
    } else if (kw == "sub") {
      std::string m, s, foc;
      if (!(ls >> m >> s >> foc))
        throw ParseError("MalformedRow", line_no,
                         "sub needs main, sub and focalisation label");
      if (!schema.main_types.count(m))
        throw ParseError("UnknownLabel", line_no, "undeclared main type " + m);
      schema.subtypes[m].insert(s);
      schema.focalisation_label[{m, s}] = foc;
    } else if (kw == "default") {
      std::string m, s;
      if (!(ls >> m >> s))
        throw ParseError("MalformedRow", line_no, "default needs main and sub");
      if (!schema.has_sub(m, s))
        throw ParseError("UnknownLabel", line_no,
                         "default " + s + " not declared under " + m);
      schema.default_subtype[m] = s;
    } else {
      throw ParseError("MalformedRow", line_no, "unknown keyword " + kw);
    }
  }
  for (const auto& [m, subs] : schema.subtypes) {
    if (!schema.default_subtype.count(m))
      throw ParseError("MalformedRow", line_no,
                       "main type " + m + " has subtypes but no default");
    (void)subs;
  }
  return schema;
}

TagSchema TagSchema::load(const std::string& path) {
  return parse(read_file(path));
}

// ---------------------------------------------------------------------------
// Inline annotation format

namespace {

struct Field {
  std::string textual;      // surface of the field
  std::size_t char_offset;  // into the raw input, for error reporting
};

bool looks_like_tag(const std::string& f) {
  return !f.empty() && f.front() == '<';
}

// Splits "main" / "main.sub", validating against the schema.
std::pair<std::string, std::optional<std::string>> parse_label(
    const std::string& label, const TagSchema& schema, std::size_t offset) {
  const auto dot = label.find('.');
  std::string main = label.substr(0, dot);
  std::optional<std::string> sub;
  if (dot != std::string::npos) sub = label.substr(dot + 1);
  if (main.empty() || !schema.has_main(main))
    throw ParseError("UnknownLabel", offset, "unknown main type '" + main + "'");
  if (sub && !schema.has_sub(main, *sub))
    throw ParseError("UnknownLabel", offset,
                     "subtype '" + *sub + "' not declared under " + main);
  return {std::move(main), std::move(sub)};
}

}  // namespace

Document parse_inline(std::string_view raw, const TagSchema& schema,
                      std::string doc_id) {
  const auto cps = text::decode_utf8(raw);

  // Whitespace-delimited fields with their character offsets.
  std::vector<Field> fields;
  {
    std::size_t i = 0;
    while (i < cps.size()) {
      if (text::is_space(cps[i].value)) {
        ++i;
        continue;
      }
      const std::size_t start = i;
      while (i < cps.size() && !text::is_space(cps[i].value)) ++i;
      const std::size_t b0 = cps[start].byte_start;
      const std::size_t b1 = cps[i - 1].byte_end;
      fields.push_back({std::string(raw.substr(b0, b1 - b0)), start});
    }
  }

  struct PendingSpan {
    std::string main;
    std::optional<std::string> sub;
    std::size_t first_text_field;
    std::size_t open_offset;
  };
  struct ClosedSpan {
    std::string main;
    std::optional<std::string> sub;
    std::size_t first_text_field;
    std::size_t last_text_field;
    std::size_t open_offset;
  };

  std::string plain;                     // fields joined by single spaces
  std::vector<std::size_t> field_start;  // char offset of each text field in plain
  std::vector<std::size_t> field_end;
  std::optional<PendingSpan> open;
  std::vector<ClosedSpan> closed;
  std::size_t plain_chars = 0;  // fields are ASCII-space joined, so char count
                                // in plain = sum of field char counts + gaps

  for (const auto& f : fields) {
    if (looks_like_tag(f.textual)) {
      const bool is_close = f.textual.size() >= 2 && f.textual[1] == '/';
      if (f.textual.back() != '>' || f.textual.size() < (is_close ? 4u : 3u))
        throw ParseError("MalformedTag", f.char_offset,
                         "malformed tag '" + f.textual + "'");
      const std::string label =
          is_close ? f.textual.substr(2, f.textual.size() - 3)
                   : f.textual.substr(1, f.textual.size() - 2);
      auto [main, sub] = parse_label(label, schema, f.char_offset);
      if (!is_close) {
        if (open)
          throw ParseError("NestedTag", f.char_offset,
                           "tag <" + label + "> opened inside <" + open->main +
                               (open->sub ? "." + *open->sub : "") + ">");
        open = PendingSpan{std::move(main), std::move(sub), field_start.size(),
                           f.char_offset};
      } else {
        if (!open)
          throw ParseError("UnbalancedTag", f.char_offset,
                           "closing </" + label + "> without an open tag");
        if (open->main != main || open->sub != sub)
          throw ParseError("UnbalancedTag", f.char_offset,
                           "closing </" + label + "> does not match open tag");
        if (open->first_text_field == field_start.size())
          throw ParseError("EmptyTag", f.char_offset,
                           "tag <" + label + "> encloses no text");
        closed.push_back({open->main, open->sub, open->first_text_field,
                          field_start.size() - 1, open->open_offset});
        open.reset();
      }
    } else {
      if (!plain.empty()) {
        plain.push_back(' ');
        ++plain_chars;
      }
      const std::size_t nchars = text::decode_utf8(f.textual).size();
      field_start.push_back(plain_chars);
      plain += f.textual;
      plain_chars += nchars;
      field_end.push_back(plain_chars);
    }
  }
  if (open)
    throw ParseError("UnbalancedTag", open->open_offset,
                     "tag opened but never closed");

  auto sentences = tokenize(plain);

  // Map each token to (sentence, local index) by character position.
  struct TokenRef {
    std::size_t sentence;
    std::size_t local;
    std::size_t char_start;
    std::size_t char_end;
  };
  std::vector<TokenRef> all_tokens;
  for (std::size_t si = 0; si < sentences.size(); ++si)
    for (std::size_t ti = 0; ti < sentences[si].tokens.size(); ++ti)
      all_tokens.push_back({si, ti, sentences[si].tokens[ti].char_start,
                            sentences[si].tokens[ti].char_end});

  for (const auto& cs : closed) {
    const std::size_t lo = field_start[cs.first_text_field];
    const std::size_t hi = field_end[cs.last_text_field];
    std::size_t first = all_tokens.size(), last = 0;
    for (std::size_t k = 0; k < all_tokens.size(); ++k) {
      if (all_tokens[k].char_start >= lo && all_tokens[k].char_end <= hi) {
        first = std::min(first, k);
        last = std::max(last, k);
      }
    }
    if (first >= all_tokens.size())
      throw ParseError("EmptyTag", cs.open_offset, "tag encloses no tokens");
    if (all_tokens[first].sentence != all_tokens[last].sentence)
      throw ParseError("SpanCrossesSentence", cs.open_offset,
                       "annotation crosses a sentence boundary");
    AnnotatedSpan span;
    span.first_token = all_tokens[first].local;
    span.last_token = all_tokens[last].local;
    span.main_type = cs.main;
    span.sub_type = cs.sub;
    sentences[all_tokens[first].sentence].spans.push_back(std::move(span));
  }

  Document doc;
  doc.doc_id = std::move(doc_id);
  doc.sentences = std::move(sentences);
  return doc;
}

std::string serialize_inline(const Document& doc) {
  std::string out;
  for (std::size_t si = 0; si < doc.sentences.size(); ++si) {
    const Sentence& sent = doc.sentences[si];
    if (si > 0) out.push_back('\n');
    auto spans = sent.spans;
    std::sort(spans.begin(), spans.end(),
              [](const AnnotatedSpan& a, const AnnotatedSpan& b) {
                return a.first_token < b.first_token;
              });
    std::size_t next_span = 0;
    bool first_piece = true;
    auto emit = [&](std::string_view piece) {
      if (!first_piece) out.push_back(' ');
      out += piece;
      first_piece = false;
    };
    for (std::size_t ti = 0; ti < sent.tokens.size(); ++ti) {
      if (next_span < spans.size() && spans[next_span].first_token == ti)
        emit("<" + spans[next_span].qualified_label() + ">");
      emit(sent.tokens[ti].surface);
      if (next_span < spans.size() && spans[next_span].last_token == ti) {
        emit("</" + spans[next_span].qualified_label() + ">");
        ++next_span;
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Splitting and validation

std::pair<Corpus, Corpus> split_corpus(const Corpus& corpus,
                                       double train_fraction,
                                       std::uint64_t seed) {
  const std::size_t n = corpus.documents.size();
  if (n < 2)
    throw DomainError("TooFewDocuments",
                      "need at least 2 documents, have " + std::to_string(n));
  if (!(train_fraction > 0.0 && train_fraction < 1.0))
    throw DomainError("BadFraction", "train_fraction must lie in (0,1)");

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  // Own Fisher-Yates: std::shuffle is not pinned across standard libraries.
  std::mt19937_64 gen(seed);
  for (std::size_t i = n - 1; i > 0; --i) {
    const std::size_t j = static_cast<std::size_t>(gen() % (i + 1));
    std::swap(order[i], order[j]);
  }

  std::size_t n_train =
      static_cast<std::size_t>(std::llround(train_fraction * double(n)));
  n_train = std::max<std::size_t>(1, std::min(n_train, n - 1));

  std::vector<bool> in_train(n, false);
  for (std::size_t i = 0; i < n_train; ++i) in_train[order[i]] = true;

  Corpus train{{}, corpus.schema};
  Corpus test{{}, corpus.schema};
  for (std::size_t i = 0; i < n; ++i)
    (in_train[i] ? train : test).documents.push_back(corpus.documents[i]);
  return {std::move(train), std::move(test)};
}

std::vector<Violation> validate_document(const Document& doc,
                                         const TagSchema& schema) {
  std::vector<Violation> v;
  auto add = [&](std::string rule, std::size_t si, std::string detail) {
    v.push_back({std::move(rule), doc.doc_id, si, std::move(detail)});
  };
  if (doc.doc_id.empty()) add("EmptyDocId", 0, "document id is empty");

  for (std::size_t si = 0; si < doc.sentences.size(); ++si) {
    const Sentence& sent = doc.sentences[si];
    for (std::size_t ti = 0; ti < sent.tokens.size(); ++ti) {
      const Token& t = sent.tokens[ti];
      if (t.char_start >= t.char_end)
        add("TokenOffsets", si,
            "token " + std::to_string(ti) + " '" + t.surface + "'");
      if (ti > 0 && sent.tokens[ti - 1].char_start >= t.char_start)
        add("TokenOrder", si, "token " + std::to_string(ti));
    }
    auto spans = sent.spans;
    std::sort(spans.begin(), spans.end(),
              [](const AnnotatedSpan& a, const AnnotatedSpan& b) {
                return a.first_token < b.first_token;
              });
    for (std::size_t k = 0; k < spans.size(); ++k) {
      const AnnotatedSpan& s = spans[k];
      if (s.first_token > s.last_token || s.last_token >= sent.tokens.size())
        add("SpanRange", si,
            "span [" + std::to_string(s.first_token) + ".." +
                std::to_string(s.last_token) + "]");
      if (k > 0 && spans[k - 1].last_token >= s.first_token)
        add("OverlappingSpans", si,
            "span [" + std::to_string(s.first_token) + ".." +
                std::to_string(s.last_token) + "] overlaps previous");
      if (!schema.has_main(s.main_type))
        add("UnknownMainType", si, s.main_type);
      else if (s.sub_type && !schema.has_sub(s.main_type, *s.sub_type))
        add("UnknownSubtype", si, s.qualified_label());
    }
  }
  return v;
}

std::vector<Violation> validate_corpus(const Corpus& corpus) {
  std::vector<Violation> v;
  std::set<std::string> seen;
  for (const Document& doc : corpus.documents) {
    auto dv = validate_document(doc, corpus.schema);
    v.insert(v.end(), dv.begin(), dv.end());
    if (!doc.doc_id.empty() && !seen.insert(doc.doc_id).second)
      v.push_back({"DuplicateDocId", doc.doc_id, 0, "duplicate document id"});
  }
  return v;
}

// ---------------------------------------------------------------------------
// Corpus files

Corpus parse_corpus(std::string_view txt, const TagSchema& schema) {
  Corpus corpus{{}, schema};
  std::optional<std::string> current_id;
  std::string body;
  std::size_t offset = 0;

  auto flush = [&]() {
    if (!current_id) return;
    corpus.documents.push_back(parse_inline(body, schema, *current_id));
    body.clear();
  };

  std::istringstream in{std::string(txt)};
  std::string line;
  while (std::getline(in, line)) {
    const std::string trimmed = text::trim(line);
    if (trimmed.rfind("#doc", 0) == 0) {
      flush();
      const std::string id = text::trim(trimmed.substr(4));
      if (id.empty())
        throw ParseError("MissingDocHeader", offset, "#doc without an id");
      current_id = id;
    } else if (!trimmed.empty() && !current_id) {
      throw ParseError("MissingDocHeader", offset,
                       "content before the first #doc header");
    } else {
      body += line;
      body.push_back('\n');
    }
    offset += text::decode_utf8(line).size() + 1;
  }
  flush();

  std::set<std::string> ids;
  for (const Document& d : corpus.documents)
    if (!ids.insert(d.doc_id).second)
      throw Error("DuplicateDocId", "duplicate document id " + d.doc_id);
  return corpus;
}

std::string serialize_corpus(const Corpus& corpus) {
  std::string out;
  for (const Document& doc : corpus.documents) {
    out += "#doc " + doc.doc_id + "\n";
    out += serialize_inline(doc);
    out.push_back('\n');
  }
  return out;
}

Corpus read_corpus(const std::string& path, const TagSchema& schema) {
  return parse_corpus(read_file(path), schema);
}

void write_corpus(const Corpus& corpus, const std::string& path) {
  write_file_atomic(path, serialize_corpus(corpus));
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("FileMissing", "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const std::string& path, std::string_view content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("WriteFailed", "cannot write " + tmp);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw IoError("WriteFailed", "short write to " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("WriteFailed", "cannot move " + tmp + " to " + path);
}

}  // namespace focale
