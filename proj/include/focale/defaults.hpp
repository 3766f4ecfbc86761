#ifndef FOCALE_DEFAULTS_HPP
#define FOCALE_DEFAULTS_HPP

#include <string_view>

namespace focale::defaults {

/// Built-in copies of the bundled resource files (data/ in the source tree),
/// so the CLI runs out of the box without a config file.
std::string_view schema();
std::string_view patterns();
std::string_view morph();
std::string_view gazetteer();
std::string_view clusters();
std::string_view verbs();
std::string_view templates();

}  // namespace focale::defaults

#endif  // FOCALE_DEFAULTS_HPP
