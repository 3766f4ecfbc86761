#include "focale/config.hpp"

#include <cstdlib>
#include <sstream>

#include "focale/text.hpp"

namespace focale {

Config Config::parse(std::string_view txt) {
  Config cfg;
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
    if (key == "schema")
      cfg.schema_path = value;
    else if (key == "morph")
      cfg.morph_path = value;
    else if (key == "gazetteer")
      cfg.gazetteer_path = value;
    else if (key == "clusters")
      cfg.clusters_path = value;
    else if (key == "verbs")
      cfg.verbs_path = value;
    else if (key == "patterns")
      cfg.patterns_path = value;
    else if (key == "radius")
      cfg.window.radius = std::strtoull(value.c_str(), nullptr, 10);
    else if (key == "sentence_bounded")
      cfg.window.sentence_bounded = (value == "true" || value == "1");
    else if (key == "alpha")
      cfg.induction.alpha = std::strtod(value.c_str(), nullptr);
    else if (key == "min_support")
      cfg.induction.min_support = std::strtoull(value.c_str(), nullptr, 10);
    else if (key == "max_order")
      cfg.induction.max_order = std::strtoull(value.c_str(), nullptr, 10);
    else if (key == "min_dp")
      cfg.induction.min_dp = std::strtod(value.c_str(), nullptr);
    else if (key == "seed")
      cfg.seed = std::strtoull(value.c_str(), nullptr, 10);
    else if (key == "jobs")
      cfg.jobs = std::strtoull(value.c_str(), nullptr, 10);
    else
      throw ParseError("MalformedRow", line_no, "unknown key '" + key + "'");
  }
  cfg.validate();
  return cfg;
}

Config Config::load(const std::string& path) { return parse(read_file(path)); }

void Config::validate() const {
  if (window.radius < 1)
    throw DomainError("DomainError", "radius must be >= 1");
  if (!(induction.alpha >= 0.0 && induction.alpha <= 1.0))
    throw DomainError("DomainError", "alpha must lie in [0,1]");
  if (!(induction.min_dp >= 0.0 && induction.min_dp <= 1.0))
    throw DomainError("DomainError", "min_dp must lie in [0,1]");
  if (induction.max_order < 1)
    throw DomainError("DomainError", "max_order must be >= 1");
  if (induction.min_support < 1)
    throw DomainError("DomainError", "min_support must be >= 1");
}

}  // namespace focale
