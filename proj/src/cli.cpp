#include "focale/cli.hpp"

#include <cstdio>
#include <iostream>

#include <CLI11.hpp>

#include "focale/defaults.hpp"
#include "focale/pipeline.hpp"

namespace focale::cli {

namespace {

Config load_config(const std::string& path) {
  return path.empty() ? Config{} : Config::load(path);
}

// Most specific under-represented features per category, printed after
// training for inspection.
void print_under_represented(const std::vector<FeatureVector>& vectors,
                             const TagSchema& schema, std::ostream& out) {
  std::map<std::string, std::vector<const FeatureVector*>> groups;
  for (const FeatureVector& v : vectors) groups[v.main_type].push_back(&v);
  for (const auto& [main, group] : groups) {
    if (!schema.has_subtypes(main)) continue;
    std::vector<FeatureVector> owned;
    owned.reserve(group.size());
    for (const FeatureVector* v : group) owned.push_back(*v);
    const auto stats = count_feature_stats(owned);
    std::map<std::string, std::vector<SpecificityScore>> under;
    for (const FeatureStats& s : stats) {
      const SpecificityScore score = specificity_score(s);
      if (score.direction == Direction::Under)
        under[s.category].push_back(score);
    }
    for (auto& [cat, scores] : under) {
      std::sort(scores.begin(), scores.end(),
                [](const SpecificityScore& a, const SpecificityScore& b) {
                  if (a.p_level != b.p_level) return a.p_level < b.p_level;
                  return a.feature < b.feature;
                });
      out << "  under-represented for " << main << "." << cat << ":";
      for (std::size_t i = 0; i < std::min<std::size_t>(3, scores.size()); ++i)
        out << " " << scores[i].feature.to_string();
      out << "\n";
    }
  }
}

std::map<std::string, std::string> build_merge_map(const std::string& target,
                                                   const TagSchema& schema) {
  const auto dot = target.find('.');
  if (dot == std::string::npos)
    throw Error("UnknownLabel",
                "--merge expects a qualified label like gsp.hum");
  const std::string main = target.substr(0, dot);
  const std::string sub = target.substr(dot + 1);
  if (!schema.has_sub(main, sub))
    throw Error("UnknownLabel", "merge target '" + target + "' not in schema");
  std::map<std::string, std::string> merge;
  const std::string& def = schema.default_subtype.at(main);
  for (const std::string& s : schema.subtypes.at(main))
    if (s != def && s != sub) merge[main + "." + s] = target;
  return merge;
}

int run_train(const Config& cfg, const std::string& corpus_path,
              const std::string& out_path) {
  const Resources res = load_resources(cfg);
  const TagContext ctx = make_context(res, cfg);
  const Corpus corpus = read_corpus(corpus_path, res.schema);
  const auto violations = validate_corpus(corpus);
  if (!violations.empty()) {
    for (const Violation& v : violations)
      std::cerr << v.rule << " in " << v.doc_id << " sentence "
                << v.sentence_index << ": " << v.detail << "\n";
    return 1;
  }
  const auto vectors = extract_training_vectors(corpus, ctx);
  RulesFile rules = train_rules(corpus, ctx, cfg);
  save_rules(rules, out_path);

  std::size_t n_rules = 0;
  for (const auto& [main, rs] : rules.rulesets) n_rules += rs.rules.size();
  std::cout << "trained on " << vectors.size() << " entity occurrences, "
            << n_rules << " rules -> " << out_path << "\n";
  print_under_represented(vectors, res.schema, std::cout);
  return 0;
}

int run_tag(const Config& cfg, const std::string& input_path,
            const std::string& rules_path, const std::string& out_path,
            bool bundles, bool gold_spans, bool baseline_mode) {
  const Resources res = load_resources(cfg);
  const TagContext ctx = make_context(res, cfg);
  const Corpus corpus = read_corpus(input_path, res.schema);

  Corpus tagged{{}, res.schema};
  std::vector<EntityBundle> bundle_list;
  if (baseline_mode) {
    tagged = baseline_corpus(corpus, ctx);
  } else {
    const RulesFile rules = load_rules(rules_path);
    auto result = tag_corpus(corpus, rules.rulesets, ctx, cfg.jobs, gold_spans);
    tagged = std::move(result.first);
    bundle_list = std::move(result.second);
  }

  const std::string serialized = serialize_corpus(tagged);
  if (out_path.empty())
    std::cout << serialized;
  else
    write_file_atomic(out_path, serialized);
  if (bundles)
    for (const EntityBundle& b : bundle_list)
      std::cout << render_bundle(b) << "\n";
  return 0;
}

int run_eval(const Config& cfg, const std::string& ref_path,
             const std::string& hyp_path, bool gold_spans,
             const std::string& merge_target, const std::string& baseline_path,
             bool tsv) {
  const Resources res = load_resources(cfg);
  const Corpus ref = read_corpus(ref_path, res.schema);
  const Corpus hyp = read_corpus(hyp_path, res.schema);
  EvalOptions options;
  options.gold_spans = gold_spans;
  if (!merge_target.empty())
    options.merge = build_merge_map(merge_target, res.schema);
  std::optional<Corpus> baseline;
  if (!baseline_path.empty())
    baseline = read_corpus(baseline_path, res.schema);
  const ScoreReport report = evaluation_report(
      ref, hyp, options, baseline ? &*baseline : nullptr);
  std::cout << render_report(report, tsv);
  return 0;
}

int run_synth(const Config& cfg, const std::string& spec_path,
              const std::string& out_path) {
  const Resources res = load_resources(cfg);
  const GeneratorSpec spec = load_generator_spec(spec_path);
  const auto templates = spec.templates_path.empty()
                             ? parse_templates(defaults::templates())
                             : load_templates(spec.templates_path);
  const Corpus corpus = generate(spec, templates, res.schema);
  write_corpus(corpus, out_path);
  std::cout << "generated " << corpus.documents.size() << " documents ("
            << spec.n_sentences << " sentences) -> " << out_path << "\n";
  return 0;
}

int run_validate(const Config& cfg, const std::string& corpus_path) {
  const Resources res = load_resources(cfg);
  const Corpus corpus = read_corpus(corpus_path, res.schema);
  const auto violations = validate_corpus(corpus);
  for (const Violation& v : violations)
    std::cout << v.rule << " in " << v.doc_id << " sentence "
              << v.sentence_index << ": " << v.detail << "\n";
  if (violations.empty()) {
    std::cout << "ok: " << corpus.documents.size() << " documents\n";
    return 0;
  }
  return 1;
}

int run_inspect(const std::string& rules_path) {
  const RulesFile rules = load_rules(rules_path);
  std::printf("alpha=%g min_support=%llu max_order=%zu min_dp=%g\n",
              rules.params.alpha,
              static_cast<unsigned long long>(rules.params.min_support),
              rules.params.max_order, rules.params.min_dp);
  for (const auto& [main, rs] : rules.rulesets) {
    std::size_t rank = 0;
    for (const Rule& r : rs.rules)
      std::printf("%s\t%zu\t%s -> %s.%s\tp_level=%.6g\tdp=%.4f\tsupport=%llu\n",
                  main.c_str(), ++rank, r.canonical_features().c_str(),
                  main.c_str(), r.target.c_str(), r.p_level, r.disc_power,
                  static_cast<unsigned long long>(r.support));
  }
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"named-entity tagging with contextual focalisation"};
  app.require_subcommand(1);
  app.fallthrough();  // lets -c appear after the subcommand name too

  std::string config_path, corpus_path, out_path, rules_path, ref_path,
      hyp_path, merge_target, baseline_path, spec_path;
  bool bundles = false, gold_spans = false, tsv = false;

  app.add_option("-c,--config", config_path, "configuration file");

  auto* train = app.add_subcommand("train", "induce subtype rules");
  train->add_option("corpus", corpus_path, "annotated training corpus")
      ->required();
  train->add_option("-o,--output", out_path, "rules file to write")->required();

  auto* tag = app.add_subcommand("tag", "recognize and resolve entities");
  tag->add_option("input", corpus_path, "corpus file to tag")->required();
  tag->add_option("-r,--rules", rules_path, "rules file")->required();
  tag->add_option("-o,--output", out_path, "tagged corpus output");
  tag->add_flag("--bundles", bundles, "print entity bundles");
  tag->add_flag("--gold-spans", gold_spans,
                "keep input spans, resolve subtypes only");

  auto* eval = app.add_subcommand("eval", "score a hypothesis against a reference");
  eval->add_option("ref", ref_path, "reference corpus")->required();
  eval->add_option("hyp", hyp_path, "hypothesis corpus")->required();
  eval->add_flag("--gold-spans", gold_spans,
                 "project reference spans before subtype scoring");
  eval->add_option("--merge", merge_target,
                   "merge non-default subtypes into this label (e.g. gsp.hum)");
  eval->add_option("--baseline", baseline_path,
                   "also score this baseline hypothesis");
  eval->add_flag("--tsv", tsv, "machine-readable output");

  auto* baseline = app.add_subcommand("baseline", "tag with default subtypes");
  baseline->add_option("input", corpus_path, "corpus file")->required();
  baseline->add_option("-o,--output", out_path, "output corpus")->required();

  auto* synth = app.add_subcommand("synth", "generate a synthetic corpus");
  synth->add_option("spec", spec_path, "generator spec file")->required();
  synth->add_option("-o,--output", out_path, "corpus to write")->required();

  auto* validate = app.add_subcommand("validate", "check corpus invariants");
  validate->add_option("corpus", corpus_path, "corpus file")->required();

  auto* inspect = app.add_subcommand("inspect-rules", "list rules ranked");
  inspect->add_option("rules", rules_path, "rules file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  try {
    const Config cfg = load_config(config_path);
    if (train->parsed()) return run_train(cfg, corpus_path, out_path);
    if (tag->parsed())
      return run_tag(cfg, corpus_path, rules_path, out_path, bundles,
                     gold_spans, false);
    if (eval->parsed())
      return run_eval(cfg, ref_path, hyp_path, gold_spans, merge_target,
                      baseline_path, tsv);
    if (baseline->parsed())
      return run_tag(cfg, corpus_path, {}, out_path, false, false, true);
    if (synth->parsed()) return run_synth(cfg, spec_path, out_path);
    if (validate->parsed()) return run_validate(cfg, corpus_path);
    if (inspect->parsed()) return run_inspect(rules_path);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace focale::cli
