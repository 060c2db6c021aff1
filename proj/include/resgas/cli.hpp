#pragma once

namespace resgas {

// Full command-line front end; returns the process exit code.
// Subcommands: gen-data, run, sweep, demo-ring.
int run_cli(int argc, const char* const* argv);

}  // namespace resgas
