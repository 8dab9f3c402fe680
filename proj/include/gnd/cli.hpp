#pragma once

#include <string>
#include <vector>

namespace gnd::cli {

// Exit codes: 0 success, 1 input or validation error, 2 certification
// failure or a stuck adversary.
int dispatch(const std::vector<std::string>& args);
int dispatch(int argc, char** argv);

} // namespace gnd::cli
