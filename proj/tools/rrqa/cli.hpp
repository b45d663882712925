#pragma once

#include "rrqa/pipeline/trace.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace rrqa::cli {

enum ExitCode : int { kOk = 0, kFailure = 1, kUsage = 2 };

/// Entry point of the rrqa tool, callable in-process by tests.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Step-by-step terminal rendering of a trace.
std::string render_trace(const PipelineTrace& trace);

}  // namespace rrqa::cli
