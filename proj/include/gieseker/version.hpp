#pragma once

namespace gieseker {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr unsigned kDefaultPrime = 13;
inline constexpr int kDefaultPrecision = 16;

}  // namespace gieseker
