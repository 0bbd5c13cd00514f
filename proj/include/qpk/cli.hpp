#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qpk::cli {

/// Runs one `qpk` invocation. `args` excludes the program name. The document
/// comes from --file, else from `in` when a command needs blocks.
/// Exit codes: 0 success / Proved / all checks pass, 1 Refuted / a check
/// failed, 2 Unknown, 10 + ErrorKind for library errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, std::istream& in);

}  // namespace qpk::cli
