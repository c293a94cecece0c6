#pragma once

namespace beamtrack {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace beamtrack
