#pragma once

namespace muso {
inline constexpr const char* kToolName = "musolab";
inline constexpr const char* kVersion = "0.1.0";
}  // namespace muso
