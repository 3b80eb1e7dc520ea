#pragma once

namespace kssim {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace kssim
