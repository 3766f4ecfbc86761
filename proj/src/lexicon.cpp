#include "focale/lexicon.hpp"

#include <algorithm>
#include <sstream>

#include "focale/text.hpp"

namespace focale {

std::string_view pos_name(Pos p) {
  switch (p) {
    case Pos::Noun: return "NOUN";
    case Pos::Verb: return "VERB";
    case Pos::Adj: return "ADJ";
    case Pos::Det: return "DET";
    case Pos::Prep: return "PREP";
    case Pos::Pron: return "PRON";
    case Pos::Adv: return "ADV";
    case Pos::Punc: return "PUNC";
    case Pos::Propn: return "PROPN";
    case Pos::Unk: return "UNK";
  }
  return "UNK";
}

std::optional<Pos> pos_from_name(std::string_view name) {
  static const std::pair<std::string_view, Pos> kTable[] = {
      {"NOUN", Pos::Noun}, {"VERB", Pos::Verb},   {"ADJ", Pos::Adj},
      {"DET", Pos::Det},   {"PREP", Pos::Prep},   {"PRON", Pos::Pron},
      {"ADV", Pos::Adv},   {"PUNC", Pos::Punc},   {"PROPN", Pos::Propn},
      {"UNK", Pos::Unk}};
  for (const auto& [n, p] : kTable)
    if (n == name) return p;
  return std::nullopt;
}

std::string_view trigger_role_name(TriggerRole r) {
  switch (r) {
    case TriggerRole::None: return "none";
    case TriggerRole::Title: return "title";
    case TriggerRole::LocPrep: return "loc_prep";
    case TriggerRole::OrgKeyword: return "org_keyword";
  }
  return "none";
}

std::optional<TriggerRole> trigger_role_from_name(std::string_view name) {
  if (name == "none" || name == "-") return TriggerRole::None;
  if (name == "title") return TriggerRole::Title;
  if (name == "loc_prep") return TriggerRole::LocPrep;
  if (name == "org_keyword") return TriggerRole::OrgKeyword;
  return std::nullopt;
}

std::string_view granularity_name(Granularity g) {
  switch (g) {
    case Granularity::Town: return "town";
    case Granularity::Region: return "region";
    case Granularity::Country: return "country";
  }
  return "country";
}

std::optional<Granularity> granularity_from_name(std::string_view name) {
  if (name == "town") return Granularity::Town;
  if (name == "region") return Granularity::Region;
  if (name == "country") return Granularity::Country;
  return std::nullopt;
}

namespace {

// Iterates non-comment TSV lines, reporting 1-based line numbers.
template <typename Fn>
void for_each_row(std::string_view tsv, Fn&& fn) {
  std::istringstream in{std::string(tsv)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    fn(text::split_fields(line, '\t'), line_no);
  }
}

std::optional<char> parse_mark(const std::string& field, char a, char b,
                               std::size_t line_no, const char* what) {
  if (field == "-" || field.empty()) return std::nullopt;
  if (field.size() == 1 && (field[0] == a || field[0] == b)) return field[0];
  throw ParseError("MalformedRow", line_no,
                   std::string("bad ") + what + " '" + field + "'");
}

}  // namespace

LexiconSet LexiconSet::parse(std::string_view morph_tsv,
                             std::string_view gazetteer_tsv,
                             std::string_view cluster_tsv,
                             std::string_view verb_tsv) {
  LexiconSet lex;

  for_each_row(morph_tsv, [&](const std::vector<std::string>& cols,
                              std::size_t line_no) {
    if (cols.size() != 5)
      throw ParseError("MalformedRow", line_no,
                       "morph row needs 5 columns, got " +
                           std::to_string(cols.size()));
    MorphEntry e;
    e.form = cols[0];
    e.lemma = cols[1];
    const auto pos = pos_from_name(cols[2]);
    if (e.form.empty() || e.lemma.empty() || !pos)
      throw ParseError("MalformedRow", line_no, "bad morph row");
    e.pos = *pos;
    e.gender = parse_mark(cols[3], 'm', 'f', line_no, "gender");
    e.number = parse_mark(cols[4], 's', 'p', line_no, "number");
    auto& bucket = lex.morph_[e.form];
    if (std::find(bucket.begin(), bucket.end(), e) == bucket.end()) {
      bucket.push_back(std::move(e));
      ++lex.morph_rows_;
    }
  });
  for (auto& [form, entries] : lex.morph_) std::sort(entries.begin(), entries.end());

  for_each_row(gazetteer_tsv, [&](const std::vector<std::string>& cols,
                                  std::size_t line_no) {
    if (cols.size() != 3 && cols.size() != 4)
      throw ParseError("MalformedRow", line_no,
                       "gazetteer row needs 3 or 4 columns, got " +
                           std::to_string(cols.size()));
    GazetteerEntry e;
    std::istringstream ps(cols[0]);
    std::string tok;
    while (ps >> tok) e.phrase.push_back(tok);
    if (e.phrase.empty())
      throw ParseError("MalformedRow", line_no, "empty gazetteer phrase");
    e.category = cols[1];
    const auto role = trigger_role_from_name(cols[2]);
    if (e.category.empty() || !role)
      throw ParseError("MalformedRow", line_no, "bad gazetteer row");
    e.trigger_role = *role;
    if (cols.size() == 4 && cols[3] != "-" && !cols[3].empty()) {
      const auto gran = granularity_from_name(cols[3]);
      if (!gran)
        throw ParseError("MalformedRow", line_no,
                         "bad granularity '" + cols[3] + "'");
      e.granularity = *gran;
    }
    lex.add_gazetteer(std::move(e));
  });

  for_each_row(cluster_tsv, [&](const std::vector<std::string>& cols,
                                std::size_t line_no) {
    if (cols.size() != 3)
      throw ParseError("MalformedRow", line_no,
                       "cluster row needs 3 columns, got " +
                           std::to_string(cols.size()));
    if (cols[0].empty() || cols[1].empty() || cols[2].empty())
      throw ParseError("MalformedRow", line_no, "bad cluster row");
    lex.cluster_labels_[cols[0]] = cols[1];
    if (lex.lemma_clusters_[cols[2]].insert(cols[0]).second)
      ++lex.cluster_rows_;
  });

  for_each_row(verb_tsv, [&](const std::vector<std::string>& cols,
                             std::size_t line_no) {
    if (cols.size() != 3)
      throw ParseError("MalformedRow", line_no,
                       "verb row needs 3 columns, got " +
                           std::to_string(cols.size()));
    VerbFrame f;
    f.lemma = cols[0];
    if (f.lemma.empty()) throw ParseError("MalformedRow", line_no, "empty lemma");
    if (cols[1] == "human")
      f.subject_restriction = SubjectRestriction::Human;
    else if (cols[1] == "any")
      f.subject_restriction = SubjectRestriction::Any;
    else
      throw ParseError("MalformedRow", line_no,
                       "bad subject restriction '" + cols[1] + "'");
    if (cols[2] != "-" && !cols[2].empty()) f.verb_class = cols[2];
    lex.verbs_[f.lemma] = std::move(f);
  });

  return lex;
}

LexiconSet LexiconSet::load(const std::string& morph_path,
                            const std::string& gazetteer_path,
                            const std::string& cluster_path,
                            const std::string& verb_path) {
  return parse(read_file(morph_path), read_file(gazetteer_path),
               read_file(cluster_path), read_file(verb_path));
}

std::vector<MorphEntry> LexiconSet::lookup_morph(std::string_view form) const {
  if (auto it = morph_.find(form); it != morph_.end()) return it->second;
  const std::string lower = text::lowercase(form);
  if (lower != form)
    if (auto it = morph_.find(lower); it != morph_.end()) return it->second;
  MorphEntry fallback;
  fallback.form = std::string(form);
  fallback.lemma = std::string(form);
  fallback.pos = text::starts_uppercase(form) ? Pos::Propn : Pos::Unk;
  return {std::move(fallback)};
}

void LexiconSet::add_gazetteer(GazetteerEntry entry) {
  // exact duplicate rows collapse
  if (std::find(entries_.begin(), entries_.end(), entry) != entries_.end())
    return;
  std::size_t node = 0;
  for (const std::string& tok : entry.phrase) {
    auto it = trie_[node].children.find(tok);
    if (it == trie_[node].children.end()) {
      trie_.push_back(TrieNode{});
      it = trie_[node].children.emplace(tok, trie_.size() - 1).first;
    }
    node = it->second;
  }
  entries_.push_back(std::move(entry));
  // first entry for a phrase wins; later same-phrase rows stay listed only
  if (trie_[node].entry < 0)
    trie_[node].entry = static_cast<int>(entries_.size() - 1);
}

const LexiconSet::TrieNode* LexiconSet::step(const TrieNode* node,
                                             const std::string& surface) const {
  auto it = node->children.find(surface);
  if (it == node->children.end()) {
    const std::string lower = text::lowercase(surface);
    if (lower == surface) return nullptr;
    it = node->children.find(lower);
    if (it == node->children.end()) return nullptr;
  }
  return &trie_[it->second];
}

std::vector<GazetteerMatch> LexiconSet::match_gazetteer(
    const std::vector<Token>& tokens) const {
  std::vector<GazetteerMatch> out;
  std::size_t i = 0;
  while (i < tokens.size()) {
    const TrieNode* node = &trie_[0];
    int best_entry = -1;
    std::size_t best_end = i;
    for (std::size_t j = i; j < tokens.size(); ++j) {
      node = step(node, tokens[j].surface);
      if (!node) break;
      if (node->entry >= 0) {
        best_entry = node->entry;
        best_end = j;
      }
    }
    if (best_entry >= 0) {
      out.push_back({i, best_end, &entries_[static_cast<std::size_t>(best_entry)]});
      i = best_end + 1;
    } else {
      ++i;
    }
  }
  return out;
}

std::vector<GazetteerMatch> LexiconSet::match_gazetteer(
    const Sentence& sentence) const {
  return match_gazetteer(sentence.tokens);
}

const GazetteerEntry* LexiconSet::find_phrase(
    const std::vector<std::string>& phrase) const {
  const TrieNode* node = &trie_[0];
  for (const std::string& tok : phrase) {
    node = step(node, tok);
    if (!node) return nullptr;
  }
  return node->entry >= 0 ? &entries_[static_cast<std::size_t>(node->entry)]
                          : nullptr;
}

std::set<std::string> LexiconSet::lookup_cluster(std::string_view lemma) const {
  if (auto it = lemma_clusters_.find(lemma); it != lemma_clusters_.end())
    return it->second;
  return {};
}

const std::string* LexiconSet::cluster_label(std::string_view cluster_id) const {
  auto it = cluster_labels_.find(cluster_id);
  return it == cluster_labels_.end() ? nullptr : &it->second;
}

std::vector<SemCluster> LexiconSet::sem_clusters() const {
  std::map<std::string, SemCluster> by_id;
  for (const auto& [id, label] : cluster_labels_)
    by_id[id] = SemCluster{id, label, {}};
  for (const auto& [lemma, ids] : lemma_clusters_)
    for (const std::string& id : ids) by_id[id].members.insert(lemma);
  std::vector<SemCluster> out;
  out.reserve(by_id.size());
  for (auto& [id, cluster] : by_id) out.push_back(std::move(cluster));
  return out;
}

bool LexiconSet::lemma_has_cluster_label(std::string_view lemma,
                                         std::string_view label) const {
  auto it = lemma_clusters_.find(lemma);
  if (it == lemma_clusters_.end()) return false;
  for (const std::string& id : it->second) {
    const std::string* l = cluster_label(id);
    if (l && *l == label) return true;
  }
  return false;
}

std::optional<VerbFrame> LexiconSet::lookup_verb_frame(
    std::string_view lemma) const {
  auto it = verbs_.find(lemma);
  if (it == verbs_.end()) return std::nullopt;
  return it->second;
}

}  // namespace focale
