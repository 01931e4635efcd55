#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gapfuse::cli {

// Full command-line entry point: parses args (without the program name),
// dispatches to fuse/eval/synth/reproduce, and reports errors on err.
// Returns the process exit status; data/file errors yield 2, usage errors
// use the parser's own codes. Kept in the library so tests can drive the
// tool in-process.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gapfuse::cli
