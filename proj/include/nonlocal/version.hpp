#pragma once

namespace nonlocal {

inline constexpr const char* library_name = "nonlocal";
inline constexpr const char* library_version = "1.0.0";

}  // namespace nonlocal
