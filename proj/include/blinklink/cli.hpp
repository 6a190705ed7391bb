#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace blinklink {

/// Entry point behind the `blinklink` binary. `args` excludes the program
/// name. Returns 0 on success, 1 on usage or validation errors, 2 on I/O
/// errors.
int cli_main(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace blinklink
