#pragma once

namespace iso {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace iso
