#pragma once

namespace tqf {

/// Entry point for the tqf command-line tool; returns the process exit code.
/// Exposed as a library call so tests can drive the full command surface.
int cli_main(int argc, const char* const* argv);

}  // namespace tqf
