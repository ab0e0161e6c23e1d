#pragma once

namespace qmle {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kFormatVersion = "1";

}  // namespace qmle
