#pragma once

#include <string_view>

namespace genemask {

inline constexpr std::string_view kToolName = "genemask";
inline constexpr std::string_view kVersion = "0.1.0";

} // namespace genemask
