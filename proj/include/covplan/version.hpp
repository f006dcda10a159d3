#pragma once

namespace covplan {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace covplan
