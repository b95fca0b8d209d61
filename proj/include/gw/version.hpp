#pragma once

namespace gw {

inline constexpr const char* kToolkitName = "graded-weyl";
inline constexpr const char* kToolkitVersion = "0.1.0";

}  // namespace gw
