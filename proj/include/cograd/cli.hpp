#pragma once

namespace cograd::cli {

/// Command-line entry point.  Exit codes: 0 success; 2 malformed input
/// (CSV, config file, or option values); 3 duplicate abscissa; 4 requested
/// confidence level unattainable; 1 anything else.  Standard output carries
/// only machine-readable JSON/CSV; diagnostics go to standard error.
int run(int argc, char** argv);

}  // namespace cograd::cli
