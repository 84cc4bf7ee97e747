#pragma once

#include <string_view>

namespace qdarwin::cli {

inline constexpr std::string_view kVersion = "0.1.0";

/// When set, figure outputs go to this directory unless --out is given, and
/// relative --out files of pip/redundancy are placed under it.
inline constexpr const char* kOutDirEnv = "QDARWIN_OUT_DIR";

/// Entry point of the `qdarwin` tool. Returns the process exit code:
/// 0 on success, 2 on usage errors, 1 on any other failure.
int run(int argc, char** argv);

}  // namespace qdarwin::cli
