#pragma once

#include <string>
#include <vector>

namespace nv0 {

inline constexpr const char* kVersion = "0.1.0";

// Full command-line entry point; returns the process exit code.
int run_cli(const std::vector<std::string>& args);
int run_cli(int argc, char** argv);

}  // namespace nv0
