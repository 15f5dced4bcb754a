#pragma once

namespace nsaudit {

inline constexpr const char* kToolkitName = "nsaudit";
inline constexpr const char* kToolkitVersion = "1.0.0";

} // namespace nsaudit
