#pragma once

namespace gridfdi {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace gridfdi
