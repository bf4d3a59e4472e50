#pragma once

namespace fraclog {

inline constexpr const char* version_string = "fraclog 1.0.0";

}  // namespace fraclog
