#ifndef FOCALE_CORPUS_HPP
#define FOCALE_CORPUS_HPP

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "focale/errors.hpp"

namespace focale {

struct Token {
  std::string surface;
  std::size_t char_start = 0;  ///< 0-based, in characters (code points)
  std::size_t char_end = 0;    ///< exclusive
  std::size_t sent_index = 0;  ///< position within its sentence
};

/// One flat entity slot. Token indices are sentence-local and inclusive.
struct AnnotatedSpan {
  std::size_t first_token = 0;
  std::size_t last_token = 0;
  std::string main_type;
  std::optional<std::string> sub_type;

  /// "gsp.loc" when a subtype is present, else the bare main type.
  std::string qualified_label() const {
    return sub_type ? main_type + "." + *sub_type : main_type;
  }

  bool operator==(const AnnotatedSpan&) const = default;
};

struct Sentence {
  std::vector<Token> tokens;
  std::vector<AnnotatedSpan> spans;  ///< sorted by first_token, no overlap
};

struct Document {
  std::string doc_id;
  std::vector<Sentence> sentences;
  std::optional<std::string> source_uri;
};

/// Declarative tag inventory: main types, their subtype trees, the default
/// (fallback) subtype, and the focalisation label attached to each reading.
struct TagSchema {
  std::set<std::string> main_types;
  std::map<std::string, std::set<std::string>> subtypes;
  std::map<std::string, std::string> default_subtype;
  std::map<std::pair<std::string, std::string>, std::string> focalisation_label;

  bool has_main(std::string_view m) const {
    return main_types.count(std::string(m)) > 0;
  }
  bool has_subtypes(std::string_view m) const {
    auto it = subtypes.find(std::string(m));
    return it != subtypes.end() && !it->second.empty();
  }
  bool has_sub(std::string_view m, std::string_view s) const {
    auto it = subtypes.find(std::string(m));
    return it != subtypes.end() && it->second.count(std::string(s)) > 0;
  }
  /// Empty string when the pair has no declared focalisation.
  std::string focalisation(const std::string& m, const std::string& s) const {
    auto it = focalisation_label.find({m, s});
    return it == focalisation_label.end() ? std::string() : it->second;
  }

  /// Parses the line-based schema format:
  ///   main <label>
  ///   sub <main> <sub> <focalisation_label>
  ///   default <main> <sub>
  static TagSchema parse(std::string_view text);
  static TagSchema load(const std::string& path);
};

struct Corpus {
  std::vector<Document> documents;
  TagSchema schema;
};

/// A broken invariant found by validation; data, not an exception.
struct Violation {
  std::string rule;  ///< TokenOffsets, TokenOrder, SpanRange, OverlappingSpans,
                     ///< UnknownMainType, UnknownSubtype, EmptyDocId, DuplicateDocId
  std::string doc_id;
  std::size_t sentence_index = 0;
  std::string detail;
};

/// Whitespace tokenization with standalone punctuation, French elision
/// splitting (l', d', qu', ...), and sentence breaks after . ! ? followed by
/// whitespace + capital (or end of input). Pure and deterministic.
std::vector<Sentence> tokenize(std::string_view raw);

/// Parses the inline annotation format: tags `<main>` / `<main.sub>` ...
/// `</...>` surrounded by whitespace. Untagged text tokenizes exactly like
/// tokenize(). Throws ParseError (UnbalancedTag, UnknownLabel, NestedTag, ...)
/// with a character offset into `raw`.
Document parse_inline(std::string_view raw, const TagSchema& schema,
                      std::string doc_id = "");

/// Single-space joined tokens, one sentence per line, tags re-inserted.
/// parse_inline(serialize_inline(d)) reproduces d's tokens and spans.
std::string serialize_inline(const Document& doc);

/// Document-level split, deterministic for a fixed seed. Sizes are
/// round(train_fraction * n) clamped so both sides keep at least one document.
std::pair<Corpus, Corpus> split_corpus(const Corpus& corpus,
                                       double train_fraction,
                                       std::uint64_t seed);

std::vector<Violation> validate_document(const Document& doc,
                                         const TagSchema& schema);
std::vector<Violation> validate_corpus(const Corpus& corpus);

/// Corpus file = `#doc <id>` header lines, inline-format bodies.
Corpus parse_corpus(std::string_view text, const TagSchema& schema);
std::string serialize_corpus(const Corpus& corpus);
Corpus read_corpus(const std::string& path, const TagSchema& schema);
void write_corpus(const Corpus& corpus, const std::string& path);

std::string read_file(const std::string& path);
/// Writes via a temp file + rename so failures never leave partial output.
void write_file_atomic(const std::string& path, std::string_view content);

}  // namespace focale

#endif  // FOCALE_CORPUS_HPP
