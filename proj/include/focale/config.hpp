#ifndef FOCALE_CONFIG_HPP
#define FOCALE_CONFIG_HPP

#include <cstdint>
#include <string>

#include "focale/features.hpp"
#include "focale/induction.hpp"

namespace focale {

/// Run configuration: resource paths (empty = built-in defaults) plus every
/// tunable threshold. Line-based `key = value` file.
struct Config {
  std::string schema_path;
  std::string morph_path;
  std::string gazetteer_path;
  std::string clusters_path;
  std::string verbs_path;
  std::string patterns_path;
  ContextWindow window;
  InductionParams induction;
  std::uint64_t seed = 42;
  std::size_t jobs = 0;  ///< 0 = hardware concurrency

  static Config parse(std::string_view text);
  static Config load(const std::string& path);

  /// Throws DomainError when a numeric field is out of its documented range.
  void validate() const;
};

}  // namespace focale

#endif  // FOCALE_CONFIG_HPP
