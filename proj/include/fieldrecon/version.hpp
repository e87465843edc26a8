#pragma once

namespace fieldrecon {

inline constexpr const char* version = "0.1.0";

}  // namespace fieldrecon
