#pragma once

namespace edcsel {

inline constexpr const char* kVersion = "0.1.0";

} // namespace edcsel
