#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace bfsi {

// Exit codes: 0 success, 1 validation failure (bad config, failed check),
// 2 runtime error or bad usage.
int cli_main(int argc, const char* const* argv);

// Same with explicit streams; args exclude the program name.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bfsi
