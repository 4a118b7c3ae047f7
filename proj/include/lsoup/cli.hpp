#pragma once

namespace lsoup::cli {

/// Runs one subcommand. Returns 0 on success, 1 on runtime errors and 2 on
/// usage errors.
int dispatch(int argc, char** argv);

}  // namespace lsoup::cli
