#ifndef WAYBOUND_CLI_HPP
#define WAYBOUND_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace waybound {

inline constexpr const char* kToolVersion = "0.1.0";

/// Run one tool invocation. `args` excludes the program name. All report
/// bodies are deterministic functions of (config, seed); wall time and the
/// timestamp go only into the run manifest. Exit codes: 0 success / all
/// checks pass, 1 a bound or relation was violated, 2 usage or input error,
/// 3 numerical-health error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// main()-shaped wrapper over std::cout / std::cerr.
int run_cli(int argc, const char* const* argv);

} // namespace waybound

#endif
