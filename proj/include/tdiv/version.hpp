#pragma once

namespace tdiv {

inline constexpr const char* version = "0.1.0";

} // namespace tdiv
