#ifndef OMIN_CLI_HPP_INCLUDED
#define OMIN_CLI_HPP_INCLUDED

#include <ostream>
#include <string>
#include <vector>

namespace omin::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitInput = 2;

// args excludes the program name. Reports go to `out` (or --output),
// one-line diagnostics to `err`.
int run(const std::vector<std::string> &args, std::ostream &out,
        std::ostream &err);

} // namespace omin::cli

#endif // OMIN_CLI_HPP_INCLUDED
