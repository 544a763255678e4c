#pragma once

namespace frisch {

inline constexpr const char* k_tool_name = "frisch";
inline constexpr const char* k_version = "1.0.0";

}  // namespace frisch
