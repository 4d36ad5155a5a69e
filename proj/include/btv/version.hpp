#pragma once

namespace btv {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace btv
