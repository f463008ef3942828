#pragma once

namespace ringlat {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace ringlat
