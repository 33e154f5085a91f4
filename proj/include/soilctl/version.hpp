#pragma once

namespace soilctl {
inline constexpr const char* kVersion = "0.1.0";
}
