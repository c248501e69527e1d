#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace fraczeta::cli {

// Exit codes: 0 ok, 1 verify failure, 2 input/schema error, 3 domain
// (divergent abscissa / near pole), 4 partial grid failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFail = 1;
inline constexpr int kExitInput = 2;
inline constexpr int kExitDomain = 3;
inline constexpr int kExitPartialGrid = 4;

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

// verify suites; prints one PASS/FAIL line per check, returns failure count
int run_verify_suite(const std::string& suite, std::uint64_t seed,
                     std::ostream& out);

}  // namespace fraczeta::cli
