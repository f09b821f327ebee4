#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qplanar {

/// Command-line entry point; args excludes the program name.
/// Returns 0 on pass, 1 on a failed check or rejected input, 2 on usage or configuration errors.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qplanar
