#ifndef LIVSIC_CLI_HPP
#define LIVSIC_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace livsic {

// Full command-line front end. Exit codes: 0 = pass, 1 = mathematical
// failure (obstruction / verification), 2 = usage or config error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace livsic

#endif
