#pragma once

namespace biprod {

inline constexpr const char* kToolName = "biprod";
inline constexpr const char* kToolVersion = "1.0.0";

} // namespace biprod
