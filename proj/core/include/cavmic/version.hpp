#pragma once

namespace cavmic {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace cavmic
