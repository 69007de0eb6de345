#ifndef HLUSIN_CLI_HPP
#define HLUSIN_CLI_HPP

#include <iostream>

namespace hlusin::cli {

/// Parses argv and runs one command. Exit status: 0 success, 1 failed check, 2 usage error.
int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr);

} // namespace hlusin::cli

#endif
