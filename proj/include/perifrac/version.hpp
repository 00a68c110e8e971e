#pragma once

namespace perifrac {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace perifrac
