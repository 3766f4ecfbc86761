#include "focale/induction.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

namespace focale {

namespace {

// log(x!) cache, grown on demand; thread_local keeps lookups lock-free for
// concurrent taggers.
long double log_factorial(std::uint64_t x) {
  thread_local std::vector<long double> table{0.0L};
  while (table.size() <= x) {
    const auto n = table.size();
    table.push_back(table.back() + std::log(static_cast<long double>(n)));
  }
  return table[x];
}

long double log_pmf(std::uint64_t j, std::uint64_t K, std::uint64_t n,
                    std::uint64_t N) {
  auto lchoose = [](std::uint64_t a, std::uint64_t b) {
    return log_factorial(a) - log_factorial(b) - log_factorial(a - b);
  };
  return lchoose(K, j) + lchoose(N - K, n - j) - lchoose(N, n);
}

}  // namespace

double hypergeom_tail(std::uint64_t k, std::uint64_t K, std::uint64_t n,
                      std::uint64_t N, Direction direction) {
  if (K > N || n > N)
    throw DomainError("DomainError",
                      "hypergeometric parameters out of range: K=" +
                          std::to_string(K) + " n=" + std::to_string(n) +
                          " N=" + std::to_string(N));
  if (k > std::min(K, n))
    throw DomainError("DomainError",
                      "k=" + std::to_string(k) + " above min(K, n)");

  const std::uint64_t j_min = (n + K > N) ? n + K - N : 0;
  const std::uint64_t j_max = std::min(K, n);

  if (direction == Direction::Over && k <= j_min) return 1.0;
  if (direction == Direction::Under) {
    if (k >= j_max) return 1.0;
    if (k < j_min) return 0.0;
  }

  // Sum exact pmf terms by recurrence from the boundary term at j = k.
  // Term ratios are monotone, so once they fall below 1 the remainder is
  // geometrically bounded and the loop can stop early.
  long double acc = 0.0L;
  long double term = std::exp(log_pmf(k, K, n, N));
  if (direction == Direction::Over) {
    for (std::uint64_t j = k;; ++j) {
      acc += term;
      if (j == j_max) break;
      const long double ratio =
          (static_cast<long double>(K - j) * static_cast<long double>(n - j)) /
          (static_cast<long double>(j + 1) *
           static_cast<long double>(N - K - n + j + 1));
      term *= ratio;
      if (ratio <= 1.0L && term < acc * 1e-22L) break;
    }
  } else {
    for (std::uint64_t j = k;; --j) {
      acc += term;
      if (j == j_min) break;
      const long double ratio =
          (static_cast<long double>(j) *
           static_cast<long double>(N - K - n + j)) /
          (static_cast<long double>(K - j + 1) *
           static_cast<long double>(n - j + 1));
      term *= ratio;
      if (ratio <= 1.0L && term < acc * 1e-22L) break;
    }
  }
  if (acc > 1.0L) acc = 1.0L;
  if (acc < 0.0L) acc = 0.0L;
  return static_cast<double>(acc);
}

SpecificityScore specificity_score(const FeatureStats& s) {
  if (s.feature_in_category > std::min(s.feature_overall, s.category_total) ||
      s.feature_overall > s.corpus_total ||
      s.category_total > s.corpus_total)
    throw DomainError("DomainError", "inconsistent feature statistics");

  SpecificityScore score;
  score.feature = s.feature;
  score.category = s.category;
  // f/t >= F/T without division: f*T >= F*t
  const bool over = s.feature_in_category * s.corpus_total >=
                    s.feature_overall * s.category_total;
  score.direction = over ? Direction::Over : Direction::Under;
  score.p_level =
      hypergeom_tail(s.feature_in_category, s.feature_overall,
                     s.category_total, s.corpus_total, score.direction);
  return score;
}

std::vector<FeatureStats> count_feature_stats(
    std::span<const FeatureVector> vectors) {
  for (const FeatureVector& v : vectors)
    if (!v.gold_subtype)
      throw Error("MissingGold",
                  "vector in " + v.doc_id + " has no gold subtype");

  const std::uint64_t total = vectors.size();
  std::map<std::string, std::uint64_t> cat_total;
  std::map<FeatureId, std::uint64_t> feat_overall;
  std::map<std::pair<FeatureId, std::string>, std::uint64_t> feat_in_cat;
  for (const FeatureVector& v : vectors) {
    ++cat_total[*v.gold_subtype];
    for (const FeatureId& f : v.active) {
      ++feat_overall[f];
      ++feat_in_cat[{f, *v.gold_subtype}];
    }
  }

  std::vector<FeatureStats> rows;
  rows.reserve(feat_overall.size() * cat_total.size());
  for (const auto& [feat, overall] : feat_overall) {
    for (const auto& [cat, tcount] : cat_total) {
      FeatureStats s;
      s.feature = feat;
      s.category = cat;
      if (auto it = feat_in_cat.find({feat, cat}); it != feat_in_cat.end())
        s.feature_in_category = it->second;
      s.category_total = tcount;
      s.feature_overall = overall;
      s.corpus_total = total;
      rows.push_back(std::move(s));
    }
  }
  return rows;
}

DiscPower discriminative_power(std::span<const FeatureId> conjunction,
                               std::string_view target,
                               std::span<const FeatureVector> vectors) {
  std::uint64_t support = 0;
  std::uint64_t hits = 0;
  for (const FeatureVector& v : vectors) {
    bool all = true;
    for (const FeatureId& f : conjunction)
      if (!v.active.count(f)) {
        all = false;
        break;
      }
    if (!all) continue;
    ++support;
    if (v.gold_subtype && *v.gold_subtype == target) ++hits;
  }
  if (support == 0)
    throw Error("ZeroSupport", "conjunction never active in training vectors");
  return {static_cast<double>(hits) / static_cast<double>(support), support};
}

std::string Rule::canonical_features() const {
  std::string out;
  for (std::size_t i = 0; i < features.size(); ++i) {
    if (i > 0) out.push_back('&');
    out += features[i].to_string();
  }
  return out;
}

// ---------------------------------------------------------------------------
// Rule induction

namespace {

struct Candidate {
  std::vector<std::size_t> feats;  // vocabulary indices, ascending
  std::string target;
  double p_level;
  double disc_power;
  std::uint64_t support;
  std::vector<std::uint32_t> covered;  // vector ids: conj active, gold == target
  std::string canonical;
};

struct Itemset {
  std::vector<std::size_t> feats;
  std::vector<std::uint32_t> postings;  // vector ids where all members active
};

std::vector<std::uint32_t> intersect(const std::vector<std::uint32_t>& a,
                                     const std::vector<std::uint32_t>& b) {
  std::vector<std::uint32_t> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(out));
  return out;
}

RuleSet induce_for_main(const std::string& main_type,
                        const std::vector<const FeatureVector*>& group,
                        const TagSchema& schema, const InductionParams& params) {
  RuleSet rs;
  rs.main_type = main_type;
  rs.params = params;

  const std::string& default_sub = schema.default_subtype.at(main_type);
  const std::uint64_t total = group.size();

  // category id per vector; categories sorted by label
  std::vector<std::string> cats(schema.subtypes.at(main_type).begin(),
                                schema.subtypes.at(main_type).end());
  std::map<std::string, std::size_t> cat_index;
  for (std::size_t i = 0; i < cats.size(); ++i) cat_index[cats[i]] = i;
  std::vector<std::size_t> vec_cat(group.size());
  std::vector<std::uint64_t> cat_total(cats.size(), 0);
  for (std::size_t vi = 0; vi < group.size(); ++vi) {
    if (!group[vi]->gold_subtype)
      throw Error("MissingGold", "training vector without gold subtype");
    auto it = cat_index.find(*group[vi]->gold_subtype);
    if (it == cat_index.end())
      throw Error("UnknownLabel", "gold subtype '" + *group[vi]->gold_subtype +
                                      "' not declared under " + main_type);
    vec_cat[vi] = it->second;
    ++cat_total[it->second];
  }

  // vocabulary + postings
  std::vector<FeatureVector> owned;  // build_vocabulary wants a span
  owned.reserve(group.size());
  for (const FeatureVector* v : group) owned.push_back(*v);
  const Vocabulary vocab = build_vocabulary(owned);
  std::vector<std::vector<std::uint32_t>> postings(vocab.size());
  for (std::size_t vi = 0; vi < group.size(); ++vi)
    for (const FeatureId& f : group[vi]->active)
      postings[vocab.index_of.at(f)].push_back(
          static_cast<std::uint32_t>(vi));

  // pool: features over-represented for at least one non-default subtype
  std::vector<bool> in_pool(vocab.size(), false);
  for (std::size_t fi = 0; fi < vocab.size(); ++fi) {
    std::vector<std::uint64_t> per_cat(cats.size(), 0);
    for (std::uint32_t vi : postings[fi]) ++per_cat[vec_cat[vi]];
    const std::uint64_t overall = postings[fi].size();
    for (std::size_t ci = 0; ci < cats.size(); ++ci) {
      if (cats[ci] == default_sub) continue;
      if (per_cat[ci] * total >= overall * cat_total[ci]) {
        in_pool[fi] = true;
        break;
      }
    }
  }

  // frequent itemsets up to max_order (level-wise, support-pruned)
  std::vector<Itemset> frequent;
  std::vector<Itemset> level;
  for (std::size_t fi = 0; fi < vocab.size(); ++fi) {
    if (!in_pool[fi]) continue;
    if (postings[fi].size() < params.min_support) continue;
    level.push_back({{fi}, postings[fi]});
  }
  for (std::size_t order = 1; order <= params.max_order && !level.empty();
       ++order) {
    frequent.insert(frequent.end(), level.begin(), level.end());
    if (order == params.max_order) break;
    std::vector<Itemset> next;
    for (const Itemset& base : level) {
      for (std::size_t fi = base.feats.back() + 1; fi < vocab.size(); ++fi) {
        if (!in_pool[fi]) continue;
        if (postings[fi].size() < params.min_support) continue;
        auto joined = intersect(base.postings, postings[fi]);
        if (joined.size() < params.min_support) continue;
        Itemset ext;
        ext.feats = base.feats;
        ext.feats.push_back(fi);
        ext.postings = std::move(joined);
        next.push_back(std::move(ext));
      }
    }
    level = std::move(next);
  }

  // score each (itemset, non-default target); keep survivors
  std::vector<Candidate> candidates;
  for (const Itemset& item : frequent) {
    std::vector<std::uint64_t> per_cat(cats.size(), 0);
    for (std::uint32_t vi : item.postings) ++per_cat[vec_cat[vi]];
    const std::uint64_t support = item.postings.size();
    for (std::size_t ci = 0; ci < cats.size(); ++ci) {
      if (cats[ci] == default_sub) continue;
      const std::uint64_t hits = per_cat[ci];
      // joint specificity of the conjunction treated as one composite
      // feature; candidates must be over-represented for their target
      if (hits * total < support * cat_total[ci]) continue;
      const double dp =
          static_cast<double>(hits) / static_cast<double>(support);
      if (dp < params.min_dp) continue;
      const double p =
          hypergeom_tail(hits, support, cat_total[ci], total, Direction::Over);
      if (p > params.alpha) continue;
      Candidate c;
      c.feats = item.feats;
      c.target = cats[ci];
      c.p_level = p;
      c.disc_power = dp;
      c.support = support;
      for (std::uint32_t vi : item.postings)
        if (vec_cat[vi] == ci) c.covered.push_back(vi);
      for (std::size_t k = 0; k < c.feats.size(); ++k) {
        if (k > 0) c.canonical.push_back('&');
        c.canonical += vocab.features[c.feats[k]].to_string();
      }
      candidates.push_back(std::move(c));
    }
  }

  std::sort(candidates.begin(), candidates.end(),
            [](const Candidate& a, const Candidate& b) {
              if (a.disc_power != b.disc_power)
                return a.disc_power > b.disc_power;
              if (a.p_level != b.p_level) return a.p_level < b.p_level;
              if (a.canonical != b.canonical) return a.canonical < b.canonical;
              return a.target < b.target;
            });

  // greedy cover of the non-default-subtype training vectors
  std::vector<bool> covered(group.size(), true);
  std::size_t uncovered = 0;
  for (std::size_t vi = 0; vi < group.size(); ++vi)
    if (cats[vec_cat[vi]] != default_sub) {
      covered[vi] = false;
      ++uncovered;
    }
  std::vector<bool> used(candidates.size(), false);
  while (uncovered > 0) {
    std::size_t pick = candidates.size();
    for (std::size_t ci = 0; ci < candidates.size(); ++ci) {
      if (used[ci]) continue;
      bool gains = false;
      for (std::uint32_t vi : candidates[ci].covered)
        if (!covered[vi]) {
          gains = true;
          break;
        }
      if (gains) {
        pick = ci;
        break;
      }
    }
    if (pick == candidates.size()) break;
    used[pick] = true;
    const Candidate& c = candidates[pick];
    Rule rule;
    for (std::size_t fi : c.feats) rule.features.push_back(vocab.features[fi]);
    rule.target = c.target;
    rule.p_level = c.p_level;
    rule.disc_power = c.disc_power;
    rule.support = c.support;
    rs.rules.push_back(std::move(rule));
    for (std::uint32_t vi : c.covered)
      if (!covered[vi]) {
        covered[vi] = true;
        --uncovered;
      }
  }
  return rs;
}

}  // namespace

std::map<std::string, RuleSet> induce_rules(
    std::span<const FeatureVector> vectors, const TagSchema& schema,
    const InductionParams& params) {
  std::map<std::string, std::vector<const FeatureVector*>> groups;
  for (const FeatureVector& v : vectors) groups[v.main_type].push_back(&v);

  std::map<std::string, RuleSet> out;
  for (const auto& [main, group] : groups) {
    if (!schema.has_subtypes(main)) continue;
    out.emplace(main, induce_for_main(main, group, schema, params));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Rules file

namespace {

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// The file joins conjunction members with '&'; payloads may contain it
// (a lemma like "R&D"), so the feature field is percent-escaped.
std::string escape_feature_field(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '%': out += "%25"; break;
      case '&': out += "%26"; break;
      case '\t': out += "%09"; break;
      case '\n': out += "%0A"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string unescape_feature_field(std::string_view s, std::size_t line_no) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '%') {
      out.push_back(s[i]);
      continue;
    }
    if (i + 2 >= s.size())
      throw ParseError("MalformedRow", line_no, "truncated escape");
    const std::string_view hex = s.substr(i + 1, 2);
    if (hex == "25") out.push_back('%');
    else if (hex == "26") out.push_back('&');
    else if (hex == "09") out.push_back('\t');
    else if (hex == "0A") out.push_back('\n');
    else throw ParseError("MalformedRow", line_no, "unknown escape");
    i += 2;
  }
  return out;
}

}  // namespace

std::string serialize_rules(const RulesFile& file) {
  std::string out;
  out += "# alpha=" + format_double(file.params.alpha) + "\n";
  out += "# min_support=" + std::to_string(file.params.min_support) + "\n";
  out += "# max_order=" + std::to_string(file.params.max_order) + "\n";
  out += "# min_dp=" + format_double(file.params.min_dp) + "\n";
  for (const auto& [key, value] : file.extra_header)
    out += "# " + key + "=" + value + "\n";
  for (const auto& [main, rs] : file.rulesets) {
    for (const Rule& r : rs.rules) {
      out += main;
      out.push_back('\t');
      for (std::size_t i = 0; i < r.features.size(); ++i) {
        if (i > 0) out.push_back('&');
        out += escape_feature_field(r.features[i].to_string());
      }
      out.push_back('\t');
      out += r.target;
      out.push_back('\t');
      out += format_double(r.p_level);
      out.push_back('\t');
      out += format_double(r.disc_power);
      out.push_back('\t');
      out += std::to_string(r.support);
      out.push_back('\n');
    }
  }
  return out;
}

RulesFile parse_rules(std::string_view txt) {
  RulesFile file;
  std::istringstream in{std::string(txt)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::string body = line.substr(1);
      while (!body.empty() && body.front() == ' ') body.erase(body.begin());
      const auto eq = body.find('=');
      if (eq == std::string::npos) continue;  // free-form comment
      const std::string key = body.substr(0, eq);
      const std::string value = body.substr(eq + 1);
      if (key == "alpha")
        file.params.alpha = std::strtod(value.c_str(), nullptr);
      else if (key == "min_support")
        file.params.min_support = std::strtoull(value.c_str(), nullptr, 10);
      else if (key == "max_order")
        file.params.max_order = std::strtoull(value.c_str(), nullptr, 10);
      else if (key == "min_dp")
        file.params.min_dp = std::strtod(value.c_str(), nullptr);
      else
        file.extra_header.emplace_back(key, value);
      continue;
    }
    std::vector<std::string> cols;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i)
      if (i == line.size() || line[i] == '\t') {
        cols.push_back(line.substr(start, i - start));
        start = i + 1;
      }
    if (cols.size() != 6)
      throw ParseError("MalformedRow", line_no,
                       "rule line needs 6 columns, got " +
                           std::to_string(cols.size()));
    Rule r;
    std::size_t fstart = 0;
    const std::string& feats = cols[1];
    for (std::size_t i = 0; i <= feats.size(); ++i)
      if (i == feats.size() || feats[i] == '&') {
        r.features.push_back(FeatureId::parse(unescape_feature_field(
            std::string_view(feats).substr(fstart, i - fstart), line_no)));
        fstart = i + 1;
      }
    r.target = cols[2];
    r.p_level = std::strtod(cols[3].c_str(), nullptr);
    r.disc_power = std::strtod(cols[4].c_str(), nullptr);
    r.support = std::strtoull(cols[5].c_str(), nullptr, 10);
    auto& rs = file.rulesets[cols[0]];
    rs.main_type = cols[0];
    rs.rules.push_back(std::move(r));
  }
  for (auto& [main, rs] : file.rulesets) rs.params = file.params;
  return file;
}

RulesFile load_rules(const std::string& path) {
  return parse_rules(read_file(path));
}

void save_rules(const RulesFile& file, const std::string& path) {
  write_file_atomic(path, serialize_rules(file));
}

}  // namespace focale
