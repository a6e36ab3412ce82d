#pragma once

namespace condot {

inline constexpr const char* kToolName = "condot";
inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace condot
