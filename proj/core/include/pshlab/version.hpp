#pragma once

namespace pshlab {

inline constexpr const char* kVersion = "0.1.0";

} // namespace pshlab
