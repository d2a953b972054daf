#pragma once

#include <string>

namespace selfex::io {

// Shortest round-trip decimal form (std::to_chars); stable across runs.
std::string number(double v);

inline constexpr int kSchemaVersion = 1;

}  // namespace selfex::io
