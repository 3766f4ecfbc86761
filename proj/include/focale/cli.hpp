#ifndef FOCALE_CLI_HPP
#define FOCALE_CLI_HPP

namespace focale::cli {

/// Entry point behind the `focale` binary. Exit status: 0 success,
/// 1 validation/operational failure, 2 usage error.
int run(int argc, const char* const* argv);

}  // namespace focale::cli

#endif  // FOCALE_CLI_HPP
