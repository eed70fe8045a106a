#pragma once

namespace vqclab {

inline constexpr const char* kVersion = "0.1.0";

} // namespace vqclab
