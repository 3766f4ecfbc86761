#include "focale/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <random>
#include <sstream>

#include "focale/text.hpp"

namespace focale {

namespace {

// Class-blind frames used when the characteristic cue is not drawn.
constexpr std::string_view kNeutralFrames[] = {
    "le débat concernait {NE} .",
    "le journal évoque {NE} .",
    "une conférence concerne {NE} .",
};

// Entity surfaces per main type; all present in the bundled gazetteer so the
// recognizer can find them again.
const std::vector<std::string>& entity_pool(const std::string& main_type) {
  static const std::map<std::string, std::vector<std::string>> kPools = {
      {"gsp",
       {"France", "Irlande", "Allemagne", "Espagne", "Italie", "Pologne",
        "Norvège", "Suède", "Danemark", "Canada", "Japon", "Chine"}},
      {"org", {"ONU", "Unesco"}},
      {"loc", {"Marseille", "Lyon", "Bordeaux", "Lille"}},
  };
  auto it = kPools.find(main_type);
  if (it == kPools.end())
    throw Error("BadTemplate", "no entity pool for main type " + main_type);
  return it->second;
}

std::pair<std::string, std::string> split_label(const std::string& label,
                                                const TagSchema& schema) {
  const auto dot = label.find('.');
  if (dot == std::string::npos)
    throw Error("BadTemplate", "subtype label '" + label +
                                   "' must be qualified (main.sub)");
  const std::string main = label.substr(0, dot);
  const std::string sub = label.substr(dot + 1);
  if (!schema.has_sub(main, sub))
    throw Error("BadTemplate", "label '" + label + "' not in schema");
  return {main, sub};
}

// mt19937_64 -> uniform double in [0, 1); pinned across platforms.
double uniform01(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

struct BuiltSentence {
  std::string txt;
  std::size_t ne_char_start;
  std::size_t ne_char_end;
};

// Substitutes {NE} (and the already-resolved {CUE}) tracking the character
// range the entity lands on.
BuiltSentence instantiate(std::string_view frame, const std::string& entity) {
  const auto pos = frame.find("{NE}");
  if (pos == std::string_view::npos)
    throw Error("BadTemplate", "template lacks the {NE} placeholder");
  BuiltSentence out{{}, 0, 0};
  const std::string before{frame.substr(0, pos)};
  const std::string after{frame.substr(pos + 4)};
  out.ne_char_start = text::decode_utf8(before).size();
  out.ne_char_end = out.ne_char_start + text::decode_utf8(entity).size();
  out.txt = before + entity + after;
  return out;
}

}  // namespace

std::vector<SentenceTemplate> parse_templates(std::string_view txt) {
  std::vector<SentenceTemplate> out;
  std::istringstream in{std::string(txt)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto cols = text::split_fields(line, '\t');
    if (cols.size() != 3)
      throw ParseError("MalformedRow", line_no,
                       "template line needs subtype, template, cue");
    SentenceTemplate t;
    const auto dot = cols[0].find('.');
    if (dot == std::string::npos)
      throw ParseError("MalformedRow", line_no,
                       "subtype must be qualified (main.sub)");
    t.main_type = cols[0].substr(0, dot);
    t.sub_type = cols[0].substr(dot + 1);
    t.template_text = cols[1];
    t.cue = cols[2];
    if (t.template_text.find("{NE}") == std::string::npos)
      throw ParseError("MalformedRow", line_no, "template lacks {NE}");
    if (t.template_text.find("{CUE}") == std::string::npos)
      throw ParseError("MalformedRow", line_no, "template lacks {CUE}");
    if (t.cue.empty())
      throw ParseError("MalformedRow", line_no, "empty cue text");
    out.push_back(std::move(t));
  }
  return out;
}

std::vector<SentenceTemplate> load_templates(const std::string& path) {
  return parse_templates(read_file(path));
}

GeneratorSpec parse_generator_spec(std::string_view txt) {
  GeneratorSpec spec;
  std::vector<std::pair<std::string, double>> dist;
  std::istringstream in{std::string(txt)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string trimmed = text::trim(line);
    if (trimmed.empty() || trimmed[0] == '#') continue;
    const auto eq = trimmed.find('=');
    if (eq == std::string::npos)
      throw ParseError("MalformedRow", line_no, "expected key = value");
    const std::string key = text::trim(trimmed.substr(0, eq));
    const std::string value = text::trim(trimmed.substr(eq + 1));
    if (key == "seed")
      spec.seed = std::strtoull(value.c_str(), nullptr, 10);
    else if (key == "sentences")
      spec.n_sentences = std::strtoull(value.c_str(), nullptr, 10);
    else if (key == "cue_reliability")
      spec.cue_reliability = std::strtod(value.c_str(), nullptr);
    else if (key == "sentences_per_doc")
      spec.sentences_per_doc = std::strtoull(value.c_str(), nullptr, 10);
    else if (key == "templates")
      spec.templates_path = value;
    else if (key == "dist") {
      std::istringstream vs(value);
      std::string label;
      double weight = 0.0;
      if (!(vs >> label >> weight))
        throw ParseError("MalformedRow", line_no, "dist needs label and weight");
      dist.emplace_back(label, weight);
    } else {
      throw ParseError("MalformedRow", line_no, "unknown key '" + key + "'");
    }
  }
  if (!dist.empty()) spec.subtype_distribution = std::move(dist);
  return spec;
}

GeneratorSpec load_generator_spec(const std::string& path) {
  GeneratorSpec spec = parse_generator_spec(read_file(path));
  return spec;
}

Corpus generate(const GeneratorSpec& spec,
                std::span<const SentenceTemplate> templates,
                const TagSchema& schema) {
  if (templates.empty()) throw Error("BadTemplate", "no templates given");
  if (!(spec.cue_reliability >= 0.0 && spec.cue_reliability <= 1.0))
    throw DomainError("DomainError", "cue_reliability must lie in [0,1]");
  if (spec.sentences_per_doc == 0)
    throw DomainError("DomainError", "sentences_per_doc must be positive");

  // normalize the distribution and index templates per label
  double total_weight = 0.0;
  for (const auto& [label, w] : spec.subtype_distribution) {
    if (w < 0.0) throw DomainError("DomainError", "negative subtype weight");
    split_label(label, schema);  // validates
    total_weight += w;
  }
  if (total_weight <= 0.0)
    throw DomainError("DomainError", "subtype distribution has no mass");
  std::vector<std::pair<std::string, double>> cumulative;
  double acc = 0.0;
  for (const auto& [label, w] : spec.subtype_distribution) {
    acc += w / total_weight;
    cumulative.emplace_back(label, acc);
  }
  cumulative.back().second = 1.0;

  std::map<std::string, std::vector<const SentenceTemplate*>> by_label;
  for (const SentenceTemplate& t : templates) {
    split_label(t.main_type + "." + t.sub_type, schema);
    by_label[t.main_type + "." + t.sub_type].push_back(&t);
  }
  for (const auto& [label, cum] : cumulative) {
    (void)cum;
    if (!by_label.count(label))
      throw Error("BadTemplate", "no template for subtype " + label);
  }

  std::mt19937_64 gen(spec.seed);
  auto pick = [&](std::size_t k) {
    return std::min(static_cast<std::size_t>(uniform01(gen) * double(k)), k - 1);
  };

  Corpus corpus{{}, schema};
  Document doc;
  std::size_t doc_no = 0;
  auto flush_doc = [&]() {
    if (doc.sentences.empty()) return;
    char id[32];
    std::snprintf(id, sizeof id, "synth-%04zu", doc_no++);
    doc.doc_id = id;
    corpus.documents.push_back(std::move(doc));
    doc = Document{};
  };

  for (std::size_t i = 0; i < spec.n_sentences; ++i) {
    const double u = uniform01(gen);
    std::string label = cumulative.back().first;
    for (const auto& [l, cum] : cumulative)
      if (u < cum) {
        label = l;
        break;
      }
    const auto& temps = by_label.at(label);
    const SentenceTemplate& tpl = *temps[pick(temps.size())];
    const bool with_cue = uniform01(gen) < spec.cue_reliability;
    const auto& pool = entity_pool(tpl.main_type);
    const std::string& entity = pool[pick(pool.size())];

    std::string frame;
    if (with_cue) {
      frame = tpl.template_text;
      const auto cue_pos = frame.find("{CUE}");
      frame = frame.substr(0, cue_pos) + tpl.cue + frame.substr(cue_pos + 5);
    } else {
      frame = std::string(kNeutralFrames[pick(std::size(kNeutralFrames))]);
    }
    BuiltSentence built = instantiate(frame, entity);
    built.txt = text::capitalize(built.txt);

    auto sentences = tokenize(built.txt);
    if (sentences.size() != 1)
      throw Error("BadTemplate",
                  "template does not yield one sentence: " + built.txt);
    Sentence sent = std::move(sentences.front());

    AnnotatedSpan span;
    bool found = false;
    for (std::size_t ti = 0; ti < sent.tokens.size(); ++ti) {
      const Token& tok = sent.tokens[ti];
      if (tok.char_start >= built.ne_char_start &&
          tok.char_end <= built.ne_char_end) {
        if (!found) span.first_token = ti;
        span.last_token = ti;
        found = true;
      }
    }
    if (!found)
      throw Error("BadTemplate", "entity tokens lost in: " + built.txt);
    span.main_type = tpl.main_type;
    span.sub_type = tpl.sub_type;
    sent.spans.push_back(std::move(span));

    doc.sentences.push_back(std::move(sent));
    if (doc.sentences.size() == spec.sentences_per_doc) flush_doc();
  }
  flush_doc();
  return corpus;
}

}  // namespace focale
