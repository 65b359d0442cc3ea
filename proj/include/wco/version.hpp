#pragma once

namespace wco {

inline constexpr const char* kToolName = "wco";
inline constexpr const char* kVersion = "0.1.0";

} // namespace wco
