#pragma once

namespace potex {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace potex
